#include "lipcurv/convexity.hpp"

#include "lipcurv/families.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

namespace lipcurv {

namespace {

double log_binomial(int n, int k) { return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0); }

double log_c_r_closed(int R)
{
    if (R % 2 == 0) return log_binomial(R, R / 2);
    const int h = (R - 1) / 2;
    return log_binomial(R, h) + std::log(h + 1.0);
}

// Marginal entropies of a finite distribution over tuples.
template <class Key>
double entropy_of(const std::map<Key, double>& m)
{
    double h = 0;
    for (const auto& [k, p] : m)
        if (p > 0) h -= p * std::log(p);
    return h;
}

// Point agreeing with b on diff[k] for k in mask, with a elsewhere.
std::size_t blend(std::size_t a, std::size_t b, const std::vector<int>& diff, std::uint64_t mask)
{
    std::size_t u = a;
    for (std::size_t k = 0; k < diff.size(); ++k)
        if (mask >> k & 1) u ^= (a ^ b) & (std::size_t{1} << diff[k]);
    return u;
}

std::vector<std::uint64_t> masks_of_size(int r, int k)
{
    std::vector<std::uint64_t> out;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << r); ++m)
        if (std::popcount(m) == k) out.push_back(m);
    return out;
}

// C_R as (x, y) masks over R coordinates: x == y for even R, edges x < y otherwise.
std::vector<std::pair<std::uint64_t, std::uint64_t>> c_r_elements(int R)
{
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    if (R % 2 == 0) {
        for (auto m : masks_of_size(R, R / 2)) out.emplace_back(m, m);
        return out;
    }
    const int h = (R - 1) / 2;
    for (auto x : masks_of_size(R, h))
        for (int j = 0; j < R; ++j)
            if (!(x >> j & 1)) out.emplace_back(x, x | (std::uint64_t{1} << j));
    return out;
}

using Zeta = std::tuple<std::size_t, std::size_t, std::size_t, MidpointAtom, MidpointAtom>;

void zeta_checks(const TransportPlan& p, int R, const AtomDistribution& mu_c, WeakCurvatureComponent& out)
{
    const auto C = c_r_elements(R);
    const double cr = static_cast<double>(C.size());
    const std::uint64_t full = R == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << R) - 1;
    std::map<Zeta, double> zeta;
    std::map<std::pair<MidpointAtom, MidpointAtom>, std::size_t> seen;
    std::map<std::pair<std::size_t, MidpointAtom>, double> am, bm;
    std::map<MidpointAtom, double> m_only;
    std::map<std::pair<MidpointAtom, MidpointAtom>, double> mm;
    std::map<std::size_t, double> a_only, b_only;
    for (auto [i, j] : p.support()) {
        const std::size_t a = p.source.points[i], b = p.target.points[j];
        std::vector<int> diff;
        for (int k = 0; k < 64; ++k)
            if ((a ^ b) >> k & 1) diff.push_back(k);
        const double w = p.at(i, j) / cr;
        for (std::size_t c = 0; c < C.size(); ++c) {
            auto [x, y] = C[c];
            MidpointAtom m = MidpointAtom::edge(blend(a, b, diff, x), blend(a, b, diff, y));
            MidpointAtom m2 = MidpointAtom::edge(blend(a, b, diff, full & ~y), blend(a, b, diff, full & ~x));
            if (!seen.emplace(std::pair{m, m2}, i * p.cols() + j).second) out.phi_injective = false;
            zeta[{i, j, c, m, m2}] += w;
            am[{i, m}] += w;
            bm[{j, m}] += w;
            m_only[m] += w;
            mm[{m, m2}] += w;
            a_only[i] += w;
            b_only[j] += w;
        }
    }
    for (const auto& [atom, mass] : m_only)
        if (std::abs(mass - mu_c.at(atom)) > 1e-9) out.zeta_matches = false;
    if (m_only.size() != mu_c.atoms.size()) out.zeta_matches = false;

    const double S = entropy_of(zeta), S_am = entropy_of(am), S_bm = entropy_of(bm), S_m = entropy_of(m_only);
    const double S_a = entropy_of(a_only), S_b = entropy_of(b_only);
    out.cond_a = S_am - S_a;
    out.cond_b = S_bm - S_b;
    const double e1 = out.cond_a - (S - S_bm) - (S_m - S_a);
    const double e2 = out.cond_b - (S - S_am) - (S_m - S_b);
    const double e3 = (S - S_am) + (S - S_bm) - (S - S_m);
    const double e4 = entropy_of(mm) - S;  // zeta_{M,M'} is isomorphic to zeta
    out.identity_error = std::max({std::abs(e1), std::abs(e2), std::abs(e3), std::abs(e4)});
    const double lc = std::log(cr);
    out.cond_bounds = out.cond_a >= lc - 1e-9 && out.cond_b >= lc - 1e-9;
}

bool cube_ambient(const MetricSpace& s) { return s.is_cube(); }

double slack_of(const TransportPlan& p, const Rational& t, double K, double w2)
{
    return displacement_convexity_slack(p, t, K, w2);
}

}  // namespace

double c_r_size(int R)
{
    if (R < 1) throw Error("bad-parameter", "R must be positive");
    if (R <= 12) {
        auto h = hypercube(R);
        return static_cast<double>(midpoints_tilde(h, 0, (std::size_t{1} << R) - 1).size());
    }
    return std::round(std::exp(log_c_r_closed(R)));
}

double log_c_r(int R)
{
    if (R <= 12) return std::log(c_r_size(R));
    return log_c_r_closed(R);
}

std::vector<int> c_r_bound_failures(int max_r)
{
    std::vector<int> out;
    for (int R = 1; R <= max_r; ++R)
        if (log_c_r(R) < 0.6 * R - 1) out.push_back(R);
    return out;
}

NegativeCurvatureReport negative_curvature_example(int k)
{
    if (k < 1 || 2 * k > 16) throw Error("bad-parameter", "need 1 <= k <= 8");
    NegativeCurvatureReport rep;
    rep.k = k;
    rep.d = 2 * k;
    auto h = hypercube(rep.d);
    std::vector<std::size_t> a, b;
    for (int i = 0; i < k; ++i) {
        a.push_back(std::size_t{1} << i);
        b.push_back(std::size_t{1} << (k + i));
    }
    auto A = Distribution::uniform(h, a), B = Distribution::uniform(h, b);
    auto w = wasserstein(A, B);
    rep.w2 = *w.exact;
    std::vector<Rational> diag(static_cast<std::size_t>(k * k), 0);
    for (int i = 0; i < k; ++i) diag[i * k + i] = Rational(1, k);
    auto dplan = make_plan(A, B, diag);
    auto mu = interpolate(dplan, Rational(1, 2));
    rep.diag_mu_empty = mu.at(MidpointAtom::point(0));
    rep.diag_entropy = entropy(mu);
    rep.marginal_entropy = entropy(A);
    rep.diag_slack = displacement_convexity_slack(dplan, Rational(1, 2), 0, w.value);

    auto me = max_entropy_optimal_plan(A, B);
    for (double x : me.mass) rep.maxent_deviation = std::max(rep.maxent_deviation, std::abs(x - 1.0 / (k * k)));
    rep.maxent_entropy = entropy(interpolate(me, Rational(1, 2)));
    rep.maxent_slack = displacement_convexity_slack(me, Rational(1, 2), 0, w.value);
    rep.weak_bound = (2 * rep.marginal_entropy + 2 * log_c_r(2)) / 3;

    auto forest = acyclic_optimal_transport(A, B);
    rep.forest_support = forest.support().size();
    rep.forest_cost = 0;
    for (auto [i, j] : forest.support()) rep.forest_cost += forest.exact[i * forest.cols() + j] * (forest.dist(i, j) * forest.dist(i, j));
    return rep;
}

WeakCurvatureReport weak_curvature_bounds(const Distribution& a, const Distribution& b)
{
    if (!a.space || !cube_ambient(*a.space)) throw Error("non-hypercube", "weak curvature bounds need a hypercube");
    WeakCurvatureReport rep;
    rep.d = a.space->cube_dim();
    auto w = wasserstein(a, b);
    rep.W2 = w.value;
    auto plan = max_entropy_optimal_plan(a, b);
    rep.S_A = entropy(a);
    rep.S_B = entropy(b);
    rep.S_C = entropy(interpolate(plan, Rational(1, 2)));

    auto parts = partition(plan);
    std::set<int> dists;
    double decomposed = 0;
    for (const auto& part : parts.parts) {
        WeakCurvatureComponent c;
        c.R = part.distances.front();
        for (int x : part.distances) dists.insert(x);
        c.eta = part.eta;
        c.c_r = c.R > 0 ? c_r_size(c.R) : 1;
        c.S_A = entropy(part.plan.source);
        c.S_B = entropy(part.plan.target);
        auto mu = interpolate(part.plan, Rational(1, 2));
        c.S_C = entropy(mu);
        c.bound = (c.S_A + c.S_B + 2 * std::log(c.c_r)) / 3;
        c.holds = c.S_C >= c.bound - 1e-9;
        if (c.R > 0) zeta_checks(part.plan, c.R, mu, c);
        if (!c.holds) rep.weak_holds = false;
        if (!c.phi_injective || !c.zeta_matches || c.identity_error > 1e-7 || !c.cond_bounds) rep.identities_hold = false;
        decomposed += c.eta * (c.S_C - std::log(c.eta));
        rep.components.push_back(c);
    }
    rep.partition_error = std::abs(rep.S_C - decomposed);
    rep.constant_distance = dists.size() == 1;
    if (rep.constant_distance) {
        int R = *dists.begin();
        double cr = R > 0 ? c_r_size(R) : 1;
        rep.weak_bound = (rep.S_A + rep.S_B + 2 * std::log(cr)) / 3;
        if (rep.S_C < rep.weak_bound - 1e-9) rep.weak_holds = false;
    }
    const double d3 = std::pow(static_cast<double>(rep.d), 3);
    rep.almost_slack = rep.S_C - rep.S_A / 3 - rep.S_B / 3 - 2.0 / (5 * d3) * rep.W2 * rep.W2 + 2.0 / 3;
    rep.almost_holds = rep.almost_slack >= -1e-9;
    return rep;
}

std::pair<Distribution, Distribution> random_constant_distance_instance(const MetricSpace& cube, Rng& rng,
                                                                        std::size_t max_support)
{
    if (!cube.is_cube()) throw Error("non-hypercube", "sampler needs a hypercube");
    const int d = cube.cube_dim();
    auto random_masses = [&](const std::vector<std::size_t>& pts) {
        std::vector<std::pair<std::size_t, Rational>> e;
        long total = 0;
        std::vector<long> w;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            w.push_back(1 + static_cast<long>(rng.below(4)));
            total += w.back();
        }
        for (std::size_t i = 0; i < pts.size(); ++i) e.emplace_back(pts[i], Rational(w[i], total));
        return Distribution::make(cube, std::move(e));
    };
    for (int attempt = 0; attempt < 10000; ++attempt) {
        const int R = 1 + static_cast<int>(rng.below(d));
        std::vector<std::size_t> src, dst;
        const std::size_t sa = 1 + rng.below(max_support), sb = 1 + rng.below(max_support);
        while (src.size() < sa) src.push_back(rng.below(cube.size()));
        while (dst.size() < sb) {
            std::size_t base = src[rng.below(src.size())];
            std::vector<int> coords(d);
            for (int i = 0; i < d; ++i) coords[i] = i;
            std::shuffle(coords.begin(), coords.end(), rng);
            for (int i = 0; i < R; ++i) base ^= std::size_t{1} << coords[i];
            dst.push_back(base);
        }
        auto A = random_masses(src), B = random_masses(dst);
        auto plan = max_entropy_optimal_plan(A, B);
        std::set<int> ds;
        for (auto [i, j] : plan.support(1e-9)) ds.insert(plan.dist(i, j));
        if (ds.size() == 1 && *ds.begin() > 0) return {A, B};
    }
    throw Error("sampler-stuck", "no constant-distance instance found");
}

WeakCurvatureSweep weak_curvature_sweep(std::size_t instances, int max_d, std::uint64_t seed)
{
    WeakCurvatureSweep rep;
    std::vector<MetricSpace> cubes;
    for (int d = 2; d <= max_d; ++d) cubes.push_back(hypercube(d));
    Rng root(seed);
    bool first = true;
    for (std::size_t n = 0; n < instances; ++n) {
        Rng rng = root.split(n);
        const MetricSpace& cube = cubes[rng.below(cubes.size())];
        auto [A, B] = random_constant_distance_instance(cube, rng);
        auto r = weak_curvature_bounds(A, B);
        ++rep.instances;
        double weak = r.S_C - r.weak_bound;
        for (const auto& c : r.components) weak = std::min(weak, c.S_C - c.bound);
        if (!r.weak_holds) ++rep.weak_violations;
        if (!r.almost_holds) ++rep.almost_violations;
        if (!r.identities_hold) ++rep.identity_failures;
        if (first || weak < rep.min_weak_slack) rep.min_weak_slack = weak;
        if (first || r.almost_slack < rep.min_almost_slack) rep.min_almost_slack = r.almost_slack;
        first = false;
    }
    return rep;
}

Flavor parse_flavor(const std::string& name)
{
    if (name == "strong") return Flavor::strong;
    if (name == "sos" || name == "sort-of-strong") return Flavor::sort_of_strong;
    if (name == "sow" || name == "sort-of-weak") return Flavor::sort_of_weak;
    if (name == "weak") return Flavor::weak;
    throw Error("bad-flavor", "unknown flavor " + name);
}

std::string flavor_name(Flavor f)
{
    switch (f) {
    case Flavor::strong: return "strong";
    case Flavor::sort_of_strong: return "sort-of-strong";
    case Flavor::sort_of_weak: return "sort-of-weak";
    case Flavor::weak: return "weak";
    }
    return "";
}

ConvexityCheck convexity_check(const Distribution& a, const Distribution& b, const Rational& t, double K, Flavor flavor)
{
    ConvexityCheck out;
    out.flavor = flavor;
    const double w2 = wasserstein(a, b).value;
    auto verts = optimal_vertices(a, b);
    out.complete = verts.complete;
    out.plans = verts.plans.size();
    const bool strong = flavor == Flavor::strong || flavor == Flavor::sort_of_strong;
    bool first = true;
    for (const auto& p : verts.plans) {
        double s = slack_of(p, t, K, w2);
        if (first || (strong ? s < out.slack : s > out.slack)) {
            out.slack = s;
            out.witness = p;
            first = false;
        }
    }
    if (!strong) {
        auto me = max_entropy_optimal_plan(a, b);
        double s = slack_of(me, t, K, w2);
        ++out.plans;
        if (s > out.slack) {
            out.slack = s;
            out.witness = me;
        }
    }
    out.holds = out.slack >= -1e-12;
    return out;
}

namespace {

std::string recognize_family(const Graph& g)
{
    const int n = g.n;
    const std::size_t m = g.edges.size();
    int maxdeg = 0;
    bool all_two = true;
    for (int u = 0; u < n; ++u) {
        maxdeg = std::max(maxdeg, g.degree(u));
        all_two &= g.degree(u) == 2;
    }
    const std::size_t full = static_cast<std::size_t>(n) * (n - 1) / 2;
    if (m == full) return "complete";
    if (n >= 3 && m + 1 == full) return "complete-minus-edge";
    if (m + 1 == static_cast<std::size_t>(n) && maxdeg <= 2) return "path";
    if (n >= 3 && all_two && m == static_cast<std::size_t>(n)) return "cycle";
    return "";
}

}  // namespace

StrongConvexityReport strong_convexity_characterization(const Graph& g)
{
    if (!is_connected(g)) throw Error("disconnected", "graph must be connected");
    if (g.n > 10) throw Error("too-large", "strong convexity check needs n <= 10");
    StrongConvexityReport rep;
    rep.family = recognize_family(g);
    rep.recognized = !rep.family.empty();

    // Two distinct non-edges inside one neighbourhood.  Prefer a pair sharing
    // a vertex z: uniform {x, y} to the point z then has v as a midpoint.
    std::optional<StrongWitness> shared, disjoint;
    for (int v = 0; v < g.n && !shared; ++v) {
        const auto& N = g.adj[v];
        std::vector<std::pair<int, int>> missing;
        for (std::size_t i = 0; i < N.size(); ++i)
            for (std::size_t j = i + 1; j < N.size(); ++j)
                if (!g.has_edge(N[i], N[j])) missing.emplace_back(N[i], N[j]);
        for (std::size_t p = 0; p < missing.size() && !shared; ++p)
            for (std::size_t q = p + 1; q < missing.size() && !shared; ++q) {
                auto [a1, b1] = missing[p];
                auto [a2, b2] = missing[q];
                int z = -1, x = -1, y = -1;
                if (a1 == a2) z = a1, x = b1, y = b2;
                else if (a1 == b2) z = a1, x = b1, y = a2;
                else if (b1 == a2) z = b1, x = a1, y = b2;
                else if (b1 == b2) z = b1, x = a1, y = a2;
                StrongWitness w;
                w.v = v;
                if (z >= 0) {
                    w.source = {std::min(x, y), std::max(x, y)};
                    w.target = {z};
                    w.plan = {{x, z}, {y, z}};
                    shared = w;
                } else if (!disjoint) {
                    w.source = {a1, a2};
                    w.target = {b1, b2};
                    w.plan = {{a1, b1}, {a2, b2}};
                    disjoint = w;
                }
            }
    }
    rep.obstruction_free = !shared && !disjoint;
    rep.agree = rep.recognized == rep.obstruction_free;
    if (rep.obstruction_free) return rep;

    StrongWitness w = shared ? *shared : *disjoint;
    auto s = MetricSpace::from_graph(g);
    auto to_points = [](const std::vector<int>& v) { return std::vector<std::size_t>(v.begin(), v.end()); };
    auto A = Distribution::uniform(s, to_points(w.source)), B = Distribution::uniform(s, to_points(w.target));
    std::vector<Rational> x(A.size() * B.size(), 0);
    bool through_v = true;
    for (auto [p, q] : w.plan) {
        auto i = std::find(A.points.begin(), A.points.end(), static_cast<std::size_t>(p)) - A.points.begin();
        auto j = std::find(B.points.begin(), B.points.end(), static_cast<std::size_t>(q)) - B.points.begin();
        x[i * B.size() + j] += Rational(1, static_cast<long>(w.plan.size()));
        through_v &= s.dist(p, w.v) == 1 && s.dist(w.v, q) == 1 && s.dist(p, q) == 2;
    }
    auto plan = make_plan(A, B, x);
    auto opt = wasserstein(A, B);
    const bool optimal = is_transportation(plan) && plan.w2 == opt.value;
    // All midpoint mass on v: S(mu_C) = 0.
    w.slack = 0 - (entropy(A) + entropy(B)) / 2;
    w.verified = optimal && through_v && w.slack < 0;
    rep.witness = w;
    return rep;
}

StrongConvexitySweep strong_convexity_exhaustive(int max_n)
{
    if (max_n > 7) throw Error("too-large", "exhaustive sweep needs n <= 7");
    StrongConvexitySweep rep;
    rep.max_n = max_n;
    for (int n = 1; n <= max_n; ++n) {
        std::vector<std::pair<int, int>> slots;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) slots.emplace_back(u, v);
        const std::uint64_t total = std::uint64_t{1} << slots.size();
        for (std::uint64_t mask = 0; mask < total; ++mask) {
            // Connectivity on bitmask adjacency before building anything.
            std::vector<std::uint32_t> adj(n, 0);
            for (std::size_t k = 0; k < slots.size(); ++k)
                if (mask >> k & 1) {
                    adj[slots[k].first] |= 1u << slots[k].second;
                    adj[slots[k].second] |= 1u << slots[k].first;
                }
            std::uint32_t reach = 1, frontier = 1;
            while (frontier) {
                std::uint32_t next = 0;
                for (int u = 0; u < n; ++u)
                    if (frontier >> u & 1) next |= adj[u];
                frontier = next & ~reach;
                reach |= next;
            }
            if (reach != (1u << n) - 1) continue;
            std::vector<std::pair<int, int>> edges;
            for (std::size_t k = 0; k < slots.size(); ++k)
                if (mask >> k & 1) edges.push_back(slots[k]);
            auto rep1 = strong_convexity_characterization(build_graph(n, edges));
            ++rep.graphs;
            rep.recognized += rep1.recognized;
            if (!rep1.agree) {
                ++rep.disagreements;
                if (rep.disagreeing.size() < 5) rep.disagreeing.push_back(edges);
            }
            if (rep1.witness && !rep1.witness->verified) ++rep.unverified_witnesses;
        }
    }
    return rep;
}

}  // namespace lipcurv
