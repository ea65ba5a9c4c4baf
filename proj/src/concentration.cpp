#include "lipcurv/concentration.hpp"

#include "lipcurv/families.hpp"
#include "lipcurv/hypercube.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace lipcurv {

namespace {

void domain(bool ok, const std::string& what)
{
    if (!ok) throw Error("bad-domain", what);
}

Rational field_sum(const IntField& f)
{
    long long s = 0;
    for (std::size_t i = 0; i < f.size(); ++i) s += f[i];
    return Rational(s);
}

int lower_median(const IntField& f)
{
    std::vector<int> v(f.values.data(), f.values.data() + f.size());
    std::sort(v.begin(), v.end());
    return v[(v.size() - 1) / 2];
}

// Fixed-width bitsets over the points of a small space.
using Bits = std::vector<std::uint64_t>;

std::size_t popcount(const Bits& b)
{
    std::size_t c = 0;
    for (auto w : b) c += std::popcount(w);
    return c;
}

}  // namespace

TailVariant parse_tail_variant(const std::string& name)
{
    if (name == "plain") return TailVariant::plain;
    if (name == "skewed") return TailVariant::skewed;
    throw Error("bad-variant", "unknown tail variant '" + name + "'");
}

double tail_bound(double sigma2, double h, TailVariant variant)
{
    domain(sigma2 > 0, "sigma2 must be positive");
    if (variant == TailVariant::plain) {
        domain(h >= 0, "plain tail needs h >= 0");
        return std::exp(-h * h / (2 * sigma2));
    }
    const double sigma = std::sqrt(sigma2);
    domain(h >= sigma, "skewed tail needs h' >= sigma");
    const double z = h / sigma - 1;
    return std::exp(-z * z / 2);
}

Rational empirical_tail(const IntField& f, const Rational& h)
{
    const Rational n(static_cast<long long>(f.size())), total = field_sum(f);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (n * f[i] - total >= n * h) ++hits;
    return Rational(static_cast<long long>(hits)) / n;
}

Rational empirical_median_tail(const IntField& f, const Rational& h)
{
    const int m = lower_median(f);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (Rational(f[i] - m) >= h) ++hits;
    return Rational(static_cast<long long>(hits)) / Rational(static_cast<long long>(f.size()));
}

TailCheck tail_check(const IntField& f, double sigma2, double step)
{
    TailCheck out;
    out.sigma2 = sigma2;
    out.worst_margin = 1;
    const int lo = f.values.minCoeff(), hi = f.values.maxCoeff();
    const double sigma = std::sqrt(sigma2);
    auto record = [&](double bound, const Rational& tail) {
        ++out.points;
        double margin = bound - to_double(tail);
        out.worst_margin = std::min(out.worst_margin, margin);
        if (margin < -1e-12) ++out.violations;
    };
    for (double h = 0; h <= hi - lo + 1e-9; h += step) {
        record(tail_bound(sigma2, h), empirical_tail(f, Rational(h)));
        record(tail_bound(sigma2, sigma + h, TailVariant::skewed), empirical_median_tail(f, Rational(sigma + h)));
    }

    const Rational n(static_cast<long long>(f.size()));
    const Rational mu = field_sum(f) / n;
    const int m = lower_median(f);
    Rational dev_m = 0, dev_mu = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        dev_m += abs(Rational(f[i] - m));
        dev_mu += abs(Rational(f[i]) - mu);
    }
    dev_m /= n;
    dev_mu /= n;
    out.mean_minus_median = to_double(abs(mu - m));
    out.abs_dev_median = to_double(dev_m);
    out.abs_dev_mean = to_double(dev_mu);
    out.std_dev = std::sqrt(to_double(variance(f)));
    out.chain_holds = abs(mu - m) <= dev_m && dev_m <= dev_mu && out.abs_dev_mean <= out.std_dev + 1e-12;
    return out;
}

PermutationVariance permutation_variance(int n)
{
    if (n < 1 || n > 8) throw Error("too-large", "permutation variance is exhaustive for n <= 8");
    PermutationVariance out;
    out.n = n;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    long long s1 = 0, s2 = 0, count = 0;
    do {
        int x = 0;
        for (int i = 0; i < n; ++i) {
            bool high = 2 * (perm[i] + 1) > n;
            x += i < n / 2 ? high : !high;
        }
        out.field.push_back(x);
        s1 += x;
        s2 += x * x;
        ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    out.exact = Rational(count * s2 - s1 * s1) / Rational(count * count);
    if (n % 2) {
        out.formula = Rational(n, 4) + Rational((n - 1) * (n - 1) - 2, 8 * n * n);
        out.corrected = Rational((n - 1) * (n + 1) * (n + 1), 4 * n * n);
    } else {
        out.formula = out.corrected = Rational(n * n, 4 * (n - 1));
    }
    out.matches = out.exact == out.formula;
    out.matches_corrected = out.exact == out.corrected;
    return out;
}

LevelSetSigma level_set_sigma(int n, int r)
{
    if (n < 3 || r < 0 || r > n || (n - r) % 2) throw Error("bad-domain", "need n >= 3, 0 <= r <= n, n - r even");
    LevelSetSigma out;
    out.n = n;
    out.r = r;
    out.bound = n - 1 + r * r / 4.0;
    std::vector<int> levels{(n - r) / 2};
    if (r > 0) levels.push_back((n + r) / 2);
    auto space = boolean_levels(n, levels);
    // 20 points enumerate in under a minute; 30 points exhaust the node budget.
    PoolOptions opt;
    opt.exhaustive_limit = 20;
    auto est = subgaussian_constant(space, Grid{}, opt);
    out.sigma2 = est.sigma2_grid_sup;
    out.exhaustive = est.exhaustive;
    out.below = out.sigma2 < out.bound;
    return out;
}

double linear_far_bound(int n, double c, int R, int k, double h)
{
    return std::exp((R + 3) * std::log(c) - std::log(static_cast<double>(k)) - h * h / (2.0 * (n - 1)));
}

LinearFarReport linear_far_check(int n, double c, int R, const std::vector<int>& levels, int trials,
                                 std::uint64_t seed)
{
    LinearFarReport out;
    out.n = n;
    out.c = c;
    out.R = R;
    out.levels = levels;
    const int k = static_cast<int>(levels.size());
    auto fail = [&](const std::string& why) {
        if (out.violated.empty()) out.violated = why;
    };
    if (c < 2) fail("c >= 2");
    if (n < 3) fail("n >= 3");
    if (!((c - 1) / (2 * (c + 1)) * n > R)) fail("(c-1)/(2(c+1)) n > R");
    if (!(R > std::sqrt(n * std::log(c / (c - 1))))) fail("R > sqrt(n ln(c/(c-1)))");
    if (k == 0) fail("at least one level");
    for (int r : levels)
        if (std::abs(n - 2 * r) > 2 * R || r < 0 || r > n) fail("|n/2 - r_i| <= R");
    out.domain_ok = out.violated.empty();
    if (!out.domain_ok) return out;
    out.exponent_constant = (R + 3) * std::log(c) - std::log(static_cast<double>(k));
    if (n > 16) throw Error("too-large", "the exact mean of X_* needs the full cube (n <= 16)");

    const std::size_t N = std::size_t{1} << n;
    std::vector<std::uint64_t> on_levels;
    for (std::uint64_t u = 0; u < N; ++u)
        if (std::find(levels.begin(), levels.end(), std::popcount(u)) != levels.end()) on_levels.push_back(u);
    Rng root(seed);
    out.worst_margin = 1;
    for (int trial = 0; trial < trials; ++trial) {
        Rng rng = root.split(static_cast<std::uint64_t>(trial));
        // Alternate random scattered sets and Hamming balls.
        std::vector<std::uint64_t> A;
        if (trial % 2 == 0) {
            std::size_t size = 1 + rng.below(8);
            for (std::size_t i = 0; i < size; ++i) A.push_back(rng.below(N));
        } else {
            std::uint64_t centre = rng.below(N);
            int radius = static_cast<int>(rng.below(static_cast<std::uint64_t>(n / 2 + 1)));
            for (std::uint64_t u = 0; u < N; ++u)
                if (std::popcount(u ^ centre) <= radius) A.push_back(u);
        }
        std::vector<int> dist(N, -1);
        std::vector<std::uint64_t> frontier;
        for (auto a : A)
            if (dist[a] < 0) {
                dist[a] = 0;
                frontier.push_back(a);
            }
        for (std::size_t head = 0; head < frontier.size(); ++head) {
            auto u = frontier[head];
            for (int b = 0; b < n; ++b) {
                auto v = u ^ (std::uint64_t{1} << b);
                if (dist[v] < 0) {
                    dist[v] = dist[u] + 1;
                    frontier.push_back(v);
                }
            }
        }
        long long total = 0;
        for (int x : dist) total += x;
        const Rational mean_star = Rational(total) / Rational(static_cast<long long>(N));
        ++out.fields;
        for (int h2 = 0; h2 <= 2 * n; ++h2) {
            const Rational h(h2, 2);
            std::size_t hits = 0;
            for (auto u : on_levels)
                if (Rational(dist[u]) - mean_star >= h) ++hits;
            double tail = static_cast<double>(hits) / on_levels.size();
            double margin = linear_far_bound(n, c, R, k, h2 / 2.0) - tail;
            ++out.checks;
            out.worst_margin = std::min(out.worst_margin, margin);
            if (margin <= 0) ++out.violations;
        }
    }
    return out;
}

double levels_factor(int k, int r, double t) { return std::exp(-t * t / (8.0 * k - 8 + 2.0 * r * r)); }

LevelsSearchReport levels_adversarial_search(int max_k, std::size_t exhaustive_limit)
{
    if (max_k > 12) throw Error("too-large", "level search limited to k <= 12");
    LevelsSearchReport out;
    for (int k = 3; k <= max_k; ++k)
        for (int r = k % 2; r <= 2; r += 2) {
            std::vector<std::uint64_t> pts;
            for (std::uint64_t u = 0; u < (std::uint64_t{1} << k); ++u) {
                int w = std::popcount(u);
                if (2 * w == k - r || 2 * w == k + r) pts.push_back(u);
            }
            const std::size_t N = pts.size(), words = (N + 63) / 64;
            const bool exhaustive = N <= std::min<std::size_t>(exhaustive_limit, 20);
            for (int t = 1; t <= k; ++t) {
                LevelsSearchRow row;
                row.k = k;
                row.r = r;
                row.t = t;
                row.space = N;
                row.bound = static_cast<double>(N) * levels_factor(k, r, t);
                row.exhaustive = exhaustive;
                // near[p]: points at distance < t from p.
                std::vector<Bits> near(N, Bits(words, 0));
                for (std::size_t p = 0; p < N; ++p)
                    for (std::size_t q = 0; q < N; ++q)
                        if (std::popcount(pts[p] ^ pts[q]) < t) near[p][q / 64] |= std::uint64_t{1} << (q % 64);
                std::size_t best = 0;
                if (exhaustive) {
                    // Union of near-sets over every subset, by lowest set bit.
                    std::vector<std::uint32_t> cover(std::size_t{1} << N, 0);
                    for (std::uint32_t A = 1; A < (std::uint32_t{1} << N); ++A) {
                        int low = std::countr_zero(A);
                        cover[A] = cover[A & (A - 1)] | static_cast<std::uint32_t>(near[low][0]);
                        std::size_t size = std::popcount(A), far = N - std::popcount(cover[A]);
                        if (size <= far) best = std::max(best, size);
                    }
                } else {
                    auto grow = [&](Bits A) {
                        Bits cov(words, 0);
                        for (std::size_t p = 0; p < N; ++p)
                            if (A[p / 64] >> (p % 64) & 1)
                                for (std::size_t w = 0; w < words; ++w) cov[w] |= near[p][w];
                        std::size_t size = popcount(A);
                        if (size > N - popcount(cov)) return;
                        for (;;) {
                            best = std::max(best, size);
                            std::size_t pick = N, pick_loss = N + 1;
                            for (std::size_t p = 0; p < N; ++p) {
                                if (A[p / 64] >> (p % 64) & 1) continue;
                                std::size_t loss = 0;
                                for (std::size_t w = 0; w < words; ++w) loss += std::popcount(near[p][w] & ~cov[w]);
                                if (loss < pick_loss) {
                                    pick_loss = loss;
                                    pick = p;
                                }
                            }
                            if (pick == N || size + 1 > N - popcount(cov) - pick_loss) break;
                            A[pick / 64] |= std::uint64_t{1} << (pick % 64);
                            for (std::size_t w = 0; w < words; ++w) cov[w] |= near[pick][w];
                            ++size;
                        }
                    };
                    // Balls around one point of each level (the space is
                    // symmetric under coordinate permutations), then
                    // coordinate half-spaces |u & [j]| >= theta.
                    for (std::uint64_t centre : {pts.front(), pts.back()})
                        for (int s = 0; s <= k; ++s) {
                            Bits A(words, 0);
                            for (std::size_t p = 0; p < N; ++p)
                                if (std::popcount(pts[p] ^ centre) <= s) A[p / 64] |= std::uint64_t{1} << (p % 64);
                            grow(A);
                        }
                    for (int j = 1; j <= k; ++j)
                        for (int theta = 1; theta <= j; ++theta) {
                            Bits A(words, 0);
                            const std::uint64_t prefix = (std::uint64_t{1} << j) - 1;
                            for (std::size_t p = 0; p < N; ++p)
                                if (std::popcount(pts[p] & prefix) >= theta) A[p / 64] |= std::uint64_t{1} << (p % 64);
                            grow(A);
                        }
                }
                row.best_a = best;
                row.violated = static_cast<double>(best) > row.bound;
                if (row.violated) ++out.violations;
                out.rows.push_back(row);
            }
        }
    return out;
}

double sigma2_complete(int m)
{
    if (m < 2) return 0;
    if (m % 2 == 0) return 0.25;
    const int r = (m - 1) / 2;
    return 1.0 / (2.0 * m * std::log((r + 1.0) / r));
}

double sigma2_jn(int n)
{
    double s = n - 1;
    for (int r = 1; 2 * r + 1 <= n; ++r) s -= 1 - 2.0 / ((2 * r + 1) * std::log((r + 1.0) / r));
    return s / 4;
}

SnReport sn_bounds_report(int n)
{
    if (n < 1 || n > 6) throw Error("too-large", "grid estimate on S_n limited to n <= 6");
    SnReport out;
    out.n = n;
    auto space = symmetric_group(n);
    auto pv = permutation_variance(n);
    out.variance_lower = pv.exact;
    PoolOptions opt;
    opt.seeds.push_back(pv.field);
    // S_4 already exhausts the enumeration budget after minutes.
    if (n >= 4) opt.exhaustive_limit = 0;
    auto est = subgaussian_constant(space, Grid{}, opt);
    out.sigma2 = est.sigma2_grid_sup;
    out.exhaustive = est.exhaustive;
    out.j_n = sigma2_jn(n);
    out.above_quarter_n = out.sigma2 > n / 4.0;
    out.below_n_minus_1 = out.sigma2 <= n - 1 + 1e-12;
    out.above_j_n = n / 4.0 > out.j_n + 0.25;
    return out;
}

std::vector<double> normalized_spectrum(const Graph& g)
{
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(g.n, g.n);
    for (auto [u, v] : g.edges) {
        double w = 1.0 / std::sqrt(static_cast<double>(g.degree(u)) * g.degree(v));
        M(u, v) = M(v, u) = w;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
    auto ev = es.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

std::size_t edge_count(const Graph& g, const std::vector<char>& X, const std::vector<char>& Y)
{
    std::size_t e = 0;
    for (int u = 0; u < g.n; ++u)
        if (X[u])
            for (int v : g.adj[u]) e += Y[v] != 0;
    return e;
}

namespace {

int regular_degree(const Graph& g)
{
    const int d = g.degree(0);
    for (int u = 1; u < g.n; ++u)
        if (g.degree(u) != d) throw Error("irregular", "graph is not regular");
    return d;
}

bool mixing_ok(const Graph& g, int d, double lambda, const std::vector<char>& X, const std::vector<char>& Y,
               double* ratio)
{
    const double x = std::count(X.begin(), X.end(), 1), y = std::count(Y.begin(), Y.end(), 1);
    const double gap = std::abs(static_cast<double>(edge_count(g, X, Y)) - d * x * y / g.n);
    const double rhs = lambda * d * std::sqrt(x * y);
    if (ratio) *ratio = rhs > 0 ? gap / rhs : (gap > 1e-9 ? INFINITY : 0);
    return gap <= rhs + 1e-9;
}

std::pair<double, double> lambdas(const Graph& g)
{
    auto ev = normalized_spectrum(g);
    const std::size_t n = ev.size();
    if (n < 2) return {0, 0};
    return {ev[n - 2], std::max(std::abs(ev[0]), std::abs(ev[n - 2]))};
}

}  // namespace

ExpanderReport expander_midpoints(const Graph& g, const std::vector<int>& S, const std::vector<int>& T)
{
    if (g.n > 2000) throw Error("too-large", "expander check limited to n <= 2000");
    if (S.empty() || T.empty()) throw Error("bad-input", "S and T must be nonempty");
    ExpanderReport out;
    out.n = g.n;
    out.degree = regular_degree(g);
    std::tie(out.lambda2, out.lambda_abs) = lambdas(g);

    auto dS = bfs(g, S), dT = bfs(g, T);
    out.d_star = std::numeric_limits<int>::max();
    for (int t : T) out.d_star = std::min(out.d_star, dS[t]);
    out.degenerate = out.d_star == 0;
    const int radius = out.d_star / 2;
    std::vector<char> Sp(g.n), Tp(g.n);
    for (int u = 0; u < g.n; ++u) {
        Sp[u] = dS[u] <= radius;
        Tp[u] = dT[u] <= radius;
    }
    out.s_prime = std::count(Sp.begin(), Sp.end(), 1);
    out.t_prime = std::count(Tp.begin(), Tp.end(), 1);
    out.edges = edge_count(g, Sp, Tp);
    out.edge_bound = static_cast<double>(out.edges) / out.degree;

    auto space = MetricSpace::from_graph(g);
    std::vector<std::size_t> s(S.begin(), S.end()), t(T.begin(), T.end());
    out.midpoints = midpoints_hat(VertexSet::of(space, s), VertexSet::of(space, t)).count();
    out.mixing_holds = mixing_ok(g, out.degree, out.lambda_abs, Sp, Tp, nullptr);
    out.mixing_holds_lambda2 = mixing_ok(g, out.degree, out.lambda2, Sp, Tp, nullptr);
    return out;
}

MixingCheck mixing_lemma_check(const Graph& g, std::size_t pairs, std::uint64_t seed, bool use_lambda2)
{
    const int d = regular_degree(g);
    auto [l2, labs] = lambdas(g);
    const double lambda = use_lambda2 ? l2 : labs;
    MixingCheck out;
    Rng root(seed);
    std::vector<int> order(g.n);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = 0; i < pairs; ++i) {
        Rng rng = root.split(i);
        std::vector<char> X(g.n, 0), Y(g.n, 0);
        for (auto* set : {&X, &Y}) {
            std::shuffle(order.begin(), order.end(), rng);
            std::size_t size = 1 + rng.below(static_cast<std::uint64_t>(g.n));
            for (std::size_t j = 0; j < size; ++j) (*set)[order[j]] = 1;
        }
        double ratio = 0;
        ++out.pairs;
        if (!mixing_ok(g, d, lambda, X, Y, &ratio)) ++out.violations;
        out.worst_ratio = std::max(out.worst_ratio, ratio);
    }
    return out;
}

}  // namespace lipcurv
