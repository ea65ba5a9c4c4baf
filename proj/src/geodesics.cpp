#include "lipcurv/geodesics.hpp"

#include <Eigen/Dense>
#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lipcurv {

namespace {

std::vector<std::vector<int>> all_distances(const Graph& g)
{
    std::vector<std::vector<int>> d(g.n);
    for (int x = 0; x < g.n; ++x) d[x] = bfs(g, x);
    return d;
}

Rational vertex_factor(const Graph& g, int u, WeightVariant v)
{
    return Rational(1, g.degree(u) + (v == WeightVariant::endpoint ? 1 : 0));
}

}  // namespace

WeightVariant parse_weight_variant(const std::string& name)
{
    if (name == "1" || name == "interior") return WeightVariant::interior;
    if (name == "2" || name == "endpoint") return WeightVariant::endpoint;
    throw Error("bad-variant", "weight variant must be 1 or 2");
}

MidpointLaw exact_midpoint_law(const Graph& g, WeightVariant variant, std::optional<Rational> c)
{
    if (g.n > 200) throw Error("too-large", "exact midpoint law limited to n <= 200");
    if (c && (*c <= 0 || *c > 1)) throw Error("bad-parameter", "c must lie in (0, 1]");
    const int n = g.n;
    const auto dist = all_distances(g);
    int diam = 0;
    for (const auto& row : dist) diam = std::max(diam, *std::max_element(row.begin(), row.end()));
    std::vector<Rational> a(n), cpow(diam + 1, Rational(1));
    for (int u = 0; u < n; ++u) a[u] = vertex_factor(g, u, variant);
    if (c)
        for (int L = 1; L <= diam; ++L) cpow[L] = cpow[L - 1] * *c;
    auto ends = [&](int x, int y) {
        return variant == WeightVariant::interior ? Rational(g.degree(x) * g.degree(y))
                                                  : Rational(g.degree(x) + g.degree(y));
    };

    // P[x][z]: sum over geodesics x..z of the product of a(u) over every vertex
    // but z.  N[x][z]: number of those geodesics.
    std::vector<std::vector<Rational>> P(n, std::vector<Rational>(n));
    std::vector<std::vector<BigInt>> N(n, std::vector<BigInt>(n));
    for (int x = 0; x < n; ++x) {
        std::vector<int> order(n);
        for (int i = 0; i < n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int u, int v) { return dist[x][u] < dist[x][v]; });
        P[x][x] = 1;
        N[x][x] = 1;
        for (int z : order)
            for (int p : g.adj[z])
                if (dist[x][p] == dist[x][z] - 1) {
                    P[x][z] += P[x][p] * a[p];
                    N[x][z] += N[x][p];
                }
    }

    MidpointLaw out;
    out.variant = variant;
    out.c = c;
    out.law.assign(n, Rational(0));
    Rational even_total = 0, odd_total = 0;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            const int L = dist[x][y];
            if (L == 0) continue;
            Rational w = ends(x, y) * P[x][y] * a[y] * cpow[L];
            if (L % 2) {
                odd_total += w;
                out.odd_geodesics += N[x][y];
            } else {
                even_total += w;
                out.even_geodesics += N[x][y];
            }
        }
    for (int z = 0; z < n; ++z) {
        std::vector<std::vector<int>> sphere(diam + 1);
        for (int x = 0; x < n; ++x) sphere[dist[z][x]].push_back(x);
        Rational w = 0;
        for (int m = 1; 2 * m <= diam; ++m)
            for (int x : sphere[m])
                for (int y : sphere[m])
                    if (dist[x][y] == 2 * m) w += ends(x, y) * P[x][z] * P[y][z] * cpow[2 * m];
        out.law[z] = w * a[z];
    }
    Rational through = 0;
    for (const auto& w : out.law) through += w;
    if (through != even_total) throw std::logic_error("midpoint weights do not add up to the even geodesic weight");
    out.no_even_geodesics = even_total == 0;
    out.excluded_mass = odd_total + even_total == 0 ? Rational(0) : odd_total / (odd_total + even_total);
    if (out.no_even_geodesics) {
        for (int z = 0; z < n; ++z) out.unattained.push_back(z);
        return out;
    }
    for (auto& w : out.law) w /= even_total;

    std::optional<Rational> ratio;
    double lo = INFINITY, hi = 0;
    out.proportional = true;
    for (int z = 0; z < n; ++z) {
        if (out.law[z] == 0) {
            out.unattained.push_back(z);
            continue;
        }
        out.attaining.push_back(z);
        Rational r = out.law[z] / g.degree(z);
        if (!ratio) ratio = r;
        else if (r != *ratio) out.proportional = false;
        lo = std::min(lo, to_double(r));
        hi = std::max(hi, to_double(r));
    }
    out.ratio_spread = hi / lo - 1;
    return out;
}

bool is_geodesic_segment(const std::vector<std::vector<int>>& dist, const std::vector<int>& walk)
{
    if (walk.empty()) return false;
    return dist[walk.front()][walk.back()] == static_cast<int>(walk.size()) - 1;
}

TeleportWalk mc_teleport_walk(const Graph& g, double c, std::uint64_t steps, std::uint64_t seed, WeightVariant variant)
{
    if (!(c > 0 && c < 1)) throw Error("bad-parameter", "c must lie in (0, 1)");
    if (steps < 100000) throw Error("bad-parameter", "at least 1e5 steps");
    if (g.n > 2000) throw Error("too-large", "teleport walk limited to n <= 2000");
    const int n = g.n;
    const auto dist = all_distances(g);
    int diam = 0;
    for (const auto& row : dist) diam = std::max(diam, *std::max_element(row.begin(), row.end()));
    const double two_m = 2.0 * g.edges.size();

    TeleportWalk out;
    out.variant = variant;
    out.c = c;
    out.steps = steps;
    out.seed = seed;
    out.midpoints.assign(n, 0);
    out.occupancy.assign(n, 0);

    constexpr int batches = 100;
    const std::uint64_t batch_len = steps / batches;
    std::vector<std::vector<std::uint64_t>> batch(batches, std::vector<std::uint64_t>(n, 0));

    Rng rng(seed);
    auto edge_endpoint = [&] {
        const auto& e = g.edges[rng.below(g.edges.size())];
        return rng.below(2) ? e.first : e.second;
    };
    auto close = [&](const std::vector<int>& seg, bool overflow) {
        ++out.segments;
        const int L = static_cast<int>(seg.size()) - 1;
        if (L == 0) ++out.trivial;
        else if (overflow || !is_geodesic_segment(dist, seg)) ++out.rejected;
        else if (L % 2) ++out.odd;
        else {
            ++out.accepted;
            ++out.midpoints[seg[L / 2]];
        }
    };

    int z = edge_endpoint();
    std::vector<int> seg;
    bool open = false, overflow = false;
    for (std::uint64_t i = 0; i < steps; ++i) {
        bool teleport = variant == WeightVariant::interior
                            ? rng.uniform() >= c
                            : rng.below(static_cast<std::uint64_t>(g.degree(z) + 1)) == 0;
        if (teleport) {
            if (open) close(seg, overflow);
            z = edge_endpoint();
            seg.assign(1, z);
            open = true;
            overflow = false;
        } else {
            z = g.adj[z][rng.below(g.adj[z].size())];
            if (open && !overflow) {
                if (static_cast<int>(seg.size()) > diam) overflow = true;
                else seg.push_back(z);
            }
        }
        ++out.occupancy[z];
        if (i / batch_len < batches) ++batch[i / batch_len][z];
    }

    std::optional<Rational> tilt;
    if (variant == WeightVariant::interior) tilt = Rational(c);
    auto law = exact_midpoint_law(g, variant, tilt);
    out.target.resize(n);
    for (int v = 0; v < n; ++v) out.target[v] = to_double(law.law[v]);
    const double N = static_cast<double>(out.accepted);
    int support = 0;
    for (int v = 0; v < n; ++v) {
        const double p = out.target[v], k = static_cast<double>(out.midpoints[v]);
        if (p == 0) {
            if (k > 0) {
                ++out.outside_3sigma;
                out.min_p_value = 0;
            }
            continue;
        }
        ++support;
        if (N == 0) continue;
        out.chi_square_distance += (k / N - p) * (k / N - p) / p;
        if (std::abs(k - N * p) > 3 * std::sqrt(N * p * (1 - p))) ++out.outside_3sigma;
        if (p < 1) {
            boost::math::binomial_distribution<double> law(N, p);
            double lower = boost::math::cdf(law, k);
            double upper = k > 0 ? boost::math::cdf(boost::math::complement(law, k - 1)) : 1.0;
            out.min_p_value = std::min(out.min_p_value, std::min(1.0, 2 * std::min(lower, upper)));
        }
    }
    out.matches = N > 0 && out.min_p_value * std::max(support, 1) >= three_sigma_level;

    // Stationary law of the token chain: pi (P - I) = 0 with sum pi = 1.
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
    for (int u = 0; u < n; ++u) {
        const double d = g.degree(u);
        const double walk = variant == WeightVariant::interior ? c : d / (d + 1);
        for (int v : g.adj[u]) T(u, v) += walk / d;
        for (int v = 0; v < n; ++v) T(u, v) += (1 - walk) * g.degree(v) / two_m;
    }
    Eigen::MatrixXd A = T.transpose() - Eigen::MatrixXd::Identity(n, n);
    A.row(n - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs(n - 1) = 1;
    Eigen::VectorXd pi = A.colPivHouseholderQr().solve(rhs);
    out.stationary.assign(pi.data(), pi.data() + n);

    // Batch means at every tenth of the run.
    constexpr int checkpoints = 10;
    double min_deg_p = 1, min_stat_p = 1;
    for (int upto = batches / checkpoints; upto <= batches; upto += batches / checkpoints)
        for (int v = 0; v < n; ++v) {
            double mean = 0, sq = 0;
            for (int b = 0; b < upto; ++b) {
                double f = static_cast<double>(batch[b][v]) / batch_len;
                mean += f;
                sq += f * f;
            }
            mean /= upto;
            const double var = std::max(0.0, (sq - upto * mean * mean) / (upto - 1));
            const double se = std::sqrt(var / upto);
            auto zscore = [&](double target) {
                if (se > 0) return std::abs(mean - target) / se;
                return std::abs(mean - target) < 1e-12 ? 0.0 : INFINITY;
            };
            boost::math::students_t_distribution<double> t(upto - 1);
            auto pvalue = [&](double z) {
                return std::isinf(z) ? 0.0 : 2 * boost::math::cdf(boost::math::complement(t, z));
            };
            double zd = zscore(g.degree(v) / two_m), zs = zscore(pi(v));
            out.occupancy_degree_z = std::max(out.occupancy_degree_z, zd);
            out.occupancy_stationary_z = std::max(out.occupancy_stationary_z, zs);
            min_deg_p = std::min(min_deg_p, pvalue(zd));
            min_stat_p = std::min(min_stat_p, pvalue(zs));
        }
    const double tests = static_cast<double>(n) * checkpoints;
    out.occupancy_degree_p = std::min(1.0, min_deg_p * tests);
    out.occupancy_stationary_p = std::min(1.0, min_stat_p * tests);
    out.occupancy_degree_proportional = out.occupancy_degree_p >= three_sigma_level;
    out.occupancy_stationary = out.occupancy_stationary_p >= three_sigma_level;
    return out;
}

ConvergenceCheck mc_convergence(const Graph& g, double c, std::uint64_t base_steps, int decades, int seeds,
                                std::uint64_t seed, WeightVariant variant)
{
    ConvergenceCheck out;
    Rng root(seed);
    std::uint64_t steps = base_steps;
    for (int k = 0; k < decades; ++k, steps *= 10) {
        std::vector<double> d;
        for (int s = 0; s < seeds; ++s) {
            Rng child = root.split(static_cast<std::uint64_t>(k * seeds + s));
            d.push_back(mc_teleport_walk(g, c, steps, child(), variant).chi_square_distance);
        }
        std::nth_element(d.begin(), d.begin() + d.size() / 2, d.end());
        out.median_distance.push_back(d[d.size() / 2]);
    }
    out.decreasing = true;
    for (std::size_t i = 1; i < out.median_distance.size(); ++i)
        out.decreasing = out.decreasing && out.median_distance[i] < out.median_distance[i - 1];
    return out;
}

}  // namespace lipcurv
