#include "lipcurv/suite.hpp"

#include "lipcurv/concentration.hpp"
#include "lipcurv/convexity.hpp"
#include "lipcurv/families.hpp"
#include "lipcurv/geodesics.hpp"
#include "lipcurv/hypercube.hpp"
#include "lipcurv/isoperimetry.hpp"
#include "lipcurv/lipschitz.hpp"
#include "lipcurv/transport.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <numeric>
#include <thread>

namespace lipcurv {

namespace {

std::uint64_t derive(std::uint64_t seed, std::uint64_t stream)
{
    return Rng(seed).split(stream)();
}

double sigma2(const MetricSpace& s)
{
    return subgaussian_constant(s).sigma2_grid_sup;
}

ExperimentReport subgaussian_closed_forms(std::uint64_t)
{
    ExperimentReport r;
    auto k2 = sigma2(family("complete", {2}));
    auto k3 = sigma2(family("complete", {3}));
    auto sq = sigma2(parse_space("product:l1:complete:2*complete:2"));
    auto s2 = subgaussian_constant(symmetric_group(2));
    const double k3_closed = 1 / (6 * std::log(2.0));
    r.quantity("sigma2/complete:2", k2, Tag::estimate);
    r.quantity("sigma2/complete:3", k3, Tag::estimate);
    r.quantity("sigma2/complete:2*complete:2", sq, Tag::estimate);
    r.quantity("sigma2/symmetric_group:2", s2.sigma2_grid_sup, Tag::estimate);
    r.quantity("c2/symmetric_group:2", to_json(s2.c2));
    r.certify("complete:2", std::abs(k2 - 0.25) <= 1e-6, "sigma2(K2) = 1/4 within 1e-6");
    r.certify("complete:3", std::abs(k3 - k3_closed) <= 1e-4, "sigma2(K3) = 1/(6 ln 2) within 1e-4",
              Json{{"closed_form", k3_closed}});
    r.certify("complete:2*complete:2", std::abs(sq - 0.5) <= 1e-4, "sigma2(K2 x K2) = 1/2 within 1e-4");
    r.certify("symmetric_group:2", s2.c2 == 1 && s2.sigma2_grid_sup == 1.0, "sigma2(S2) = 1 exactly");
    return r;
}

ExperimentReport spread_below_sigma(std::uint64_t)
{
    ExperimentReport r;
    std::vector<std::string> names;
    for (int n = 2; n <= 5; ++n) names.push_back("complete:" + std::to_string(n));
    for (int n = 3; n <= 8; ++n) names.push_back("cycle:" + std::to_string(n));
    for (int n = 2; n <= 8; ++n) names.push_back("path:" + std::to_string(n));
    for (int k = 1; k <= 4; ++k) names.push_back("tripod:" + std::to_string(k));
    for (int k = 1; k <= 3; ++k) names.push_back("caterpillar:" + std::to_string(k));
    for (int d = 1; d <= 4; ++d) names.push_back("hypercube:" + std::to_string(d));
    const auto t = Grid{}.values();
    Json failures = Json::array();
    std::size_t inexhaustive = 0;
    for (const auto& name : names) {
        auto s = parse_space(name);
        Rational c2 = max_variance(s).c2;
        bool exhaustive = false;
        auto pool = candidate_pool(s, PoolOptions{}, &exhaustive);
        inexhaustive += !exhaustive;
        auto curve = log_moment_envelope(pool, t);
        // Supremum over strictly positive t only; the t -> 0 limit would make this trivial.
        double sup = 0;
        for (std::size_t i = 0; i < t.size(); ++i) sup = std::max(sup, 2 * curve.value[i] / (t[i] * t[i]));
        r.quantity("c2/" + name, to_json(c2));
        r.quantity("sigma2_positive_grid/" + name, sup, Tag::estimate);
        // 2 L(t)/t^2 = var + k3 t/3 + k4 t^2/12 + ..., the reflected field makes
        // k3 >= 0 available, and k4 >= -2 var^2 >= -diam^4/8.
        const double diam = s.diameter();
        if (to_double(c2) > sup + t[0] * t[0] * std::pow(diam, 4) / 12) failures.push_back(name);
    }
    r.certify("spread-below-sigma", failures.empty() && inexhaustive == 0,
              "c^2 <= sup over the positive grid of 2 L_G(t) / t^2 (up to the t_min^2 term) on every listed space",
              failures);
    return r;
}

ExperimentReport odd_cycles(std::uint64_t)
{
    ExperimentReport r;
    for (int n : {5, 7}) {
        auto rep = odd_cycle_optimality(n);
        const std::string name = "cycle:" + std::to_string(n);
        r.quantity("witnesses_checked/" + name, rep.witnesses_checked);
        Json w = nullptr;
        if (rep.counterexample) w = Json{{"field", *rep.counterexample}, {"t", rep.counterexample_t.value_or(0)}};
        r.certify(name, rep.holds && rep.witnesses_checked > 0,
                  "every log-moment envelope witness is a translated or reflected distance function", w);
    }
    return r;
}

ExperimentReport tripod(std::uint64_t)
{
    ExperimentReport r;
    const int k = 6;
    auto rep = tripod_examples(k, false);
    r.quantity("c2", to_json(rep.c2));
    r.quantity("mean", to_json(rep.mean));
    r.certify("witness", rep.x_optimal && rep.witnesses_match,
              "the max-variance witnesses are the stated X up to hair symmetry");
    Json bad = Json::array();
    int seen = 0;
    for (const auto& row : rep.rows)
        if (row.d >= 1 && row.d <= k) {
            ++seen;
            if (row.ball_x != std::size_t(2 * k + 1 + row.d) || row.ball_neg != std::size_t(2 * k + 1 + 2 * row.d))
                bad.push_back(Json{{"d", row.d}, {"ball_x", row.ball_x}, {"ball_neg", row.ball_neg}});
        }
    r.certify("ball-sizes", bad.empty() && seen == k,
              "|B_d(S_{0,X})| = 2k+1+d and |B_d(S_{0,-X})| = 2k+1+2d for 1 <= d <= k", bad);
    return r;
}

ExperimentReport caterpillar(std::uint64_t)
{
    ExperimentReport r;
    for (int n : {1, 2}) {
        auto rep = caterpillar_counterexample(4, n);
        const std::string name = "n=" + std::to_string(n);
        Json fails = Json::array();
        for (const auto& [q, d] : rep.containment_failures) fails.push_back(Json{{"r", to_string(q)}, {"d", d}});
        r.quantity("containment_failures/" + name, rep.containment_failures.size());
        r.quantity("rows/" + name, rep.rows.size());
        r.certify("containment/" + name, rep.containment_all,
                  "psi^n(B_d(S_{r,X})) contains B_d(S_{r,Y}) for every (d, r)", fails);
        Json strict = Json::array();
        for (const auto& [q, d] : rep.strict_rows) strict.push_back(Json{{"r", to_string(q)}, {"d", d}});
        r.certify("strict/" + name, rep.strict_matches_prediction,
                  "containment is strict exactly when d > 0 and r >= k + 2", strict);
    }
    return r;
}

ExperimentReport six_vertex(std::uint64_t)
{
    ExperimentReport r;
    auto s = family("six_vertex", {});
    // v1..v4, w1, w2
    auto x1 = make_field(s, std::vector<int>{1, 2, 3, 4, 1, 4});
    auto x2 = make_field(s, std::vector<int>{1, 2, 3, 4, 1, 2});
    Json margins = Json::object();
    bool ok = is_lipschitz(x1).ok && is_lipschitz(x2).ok;
    for (double t : {3.0, 4.0, 5.0}) {
        double m = log_moment(x2, t) - log_moment(x1, t);
        margins[std::to_string(static_cast<int>(t))] = m;
        ok = ok && m > 1e-12;
    }
    r.quantity("margin L_X2 - L_X1", margins);
    r.quantity("var/X1", to_json(variance(x1)));
    r.quantity("var/X2", to_json(variance(x2)));
    r.certify("log-moment-order", ok, "L_X1(t) < L_X2(t) at t = 3, 4, 5 with margin above 1e-12", margins);
    return r;
}

ExperimentReport cube_convexity(std::uint64_t)
{
    ExperimentReport r;
    auto h4 = hypercube(4);
    std::size_t convex = 0;
    Json bad = Json::array();
    for (unsigned mask = 1; mask < (1u << 16); ++mask) {
        VertexSet S = VertexSet::empty(h4);
        for (int p = 0; p < 16; ++p) S.member[p] = mask >> p & 1;
        bool c = is_convex(S);
        convex += c;
        if (c != is_interval(S) && bad.size() < 10) bad.push_back(mask);
    }
    r.quantity("convex_subsets/hypercube:4", convex);
    r.certify("convex-iff-interval", bad.empty() && convex == 81,
              "a nonempty subset of H_4 is convex iff it is an interval (81 of them)", bad);
    for (int d = 3; d <= 5; ++d) {
        auto h = hypercube(d);
        auto c = convex_closure(ball(VertexSet::of(h, {0}), 1));
        r.certify("closure-of-unit-ball/d=" + std::to_string(d), c.count() == h.size(),
                  "the convex closure of the unit ball around the empty set is the whole cube");
    }
    return r;
}

ExperimentReport iterated_midpoints(std::uint64_t)
{
    ExperimentReport r;
    auto rep = iterated_midpoint_counterexample();
    r.quantity("zeta", subset_label(rep.zeta));
    r.quantity("half_levels", Json{rep.half_levels.first, rep.half_levels.second});
    r.quantity("quarter_levels", Json{rep.quarter_levels.first, rep.quarter_levels.second});
    r.quantity("hat_quarter_levels", Json{rep.hat_quarter_levels.first, rep.hat_quarter_levels.second});
    r.quantity("zeta_in_hat_quarter", rep.zeta_in_hat_quarter);
    r.certify("convex-inputs", rep.a_convex && rep.b_convex && rep.size_a == 16 && rep.size_b == 16,
              "A and B are convex sets of size 16 in H_12");
    r.certify("zeta-iterated", rep.phi_is_midpoint && rep.zeta_is_iterated,
              "zeta lies in m^(A, m^(A, B))");
    r.certify("zeta-not-quarter", !rep.zeta_in_quarter, "zeta is outside the quarter layer m_{1/4}(A, B)");
    r.certify("level-bounds", rep.half_levels == std::pair{4, 8} && rep.quarter_levels == std::pair{2, 6},
              "m^(A, B) lies in levels 4..8 and m_{1/4}(A, B) in levels 2..6");
    return r;
}

// A = {{1}..{k}}, B = {{k+1}..{2k}} uniform in H_{2k}.
std::pair<Distribution, Distribution> singleton_instance(const MetricSpace& h, int k)
{
    std::vector<std::size_t> a, b;
    for (int i = 0; i < k; ++i) {
        a.push_back(std::size_t{1} << i);
        b.push_back(std::size_t{1} << (k + i));
    }
    return {Distribution::uniform(h, a), Distribution::uniform(h, b)};
}

ExperimentReport negative_curvature(std::uint64_t)
{
    ExperimentReport r;
    auto rep = negative_curvature_example(5);
    const double expect = std::log(5.0) / 2 + std::log(2.0);
    r.quantity("diag_entropy", rep.diag_entropy);
    r.quantity("diag_slack", rep.diag_slack);
    auto h = hypercube(10);
    auto [A, B] = singleton_instance(h, 5);
    auto chk = convexity_check(A, B, Rational(1, 2), 0, Flavor::sort_of_strong);
    r.quantity("sort_of_strong_slack", chk.slack);
    r.certify("diagonal-entropy", std::abs(rep.diag_entropy - expect) <= 1e-12,
              "S(mu_C) = ln(5)/2 + ln 2 under the diagonal plan", Json{{"expected", expect}});
    r.certify("below-marginals", rep.diag_entropy < std::log(5.0), "S(mu_C) < ln 5 under the diagonal plan");
    r.certify("sort-of-strong-negative", chk.slack < 0 && rep.diag_slack < 0,
              "the sort-of-strong slack at t = 1/2, K = 0 is negative");
    return r;
}

ExperimentReport max_entropy_restoration(std::uint64_t seed)
{
    ExperimentReport r;
    auto rep = negative_curvature_example(5);
    r.quantity("maxent_deviation", rep.maxent_deviation);
    r.quantity("maxent_entropy", rep.maxent_entropy);
    r.quantity("weak_bound", rep.weak_bound);
    r.certify("product-plan", rep.maxent_deviation <= 1e-9, "the max-entropy plan is the product plan within 1e-9");
    r.certify("entropy", std::abs(rep.maxent_entropy - (std::log(2.0) + std::log(5.0))) <= 1e-9,
              "S(mu_C) = ln 2 + ln 5 under the max-entropy plan");
    r.certify("weak-bound", rep.maxent_entropy >= rep.weak_bound - 1e-12,
              "S(mu_C) >= (S_A + S_B + 2 ln|C_R|) / 3");
    auto sweep = weak_curvature_sweep(500, 8, derive(seed, 10));
    r.quantity("sweep/instances", sweep.instances);
    r.quantity("sweep/min_weak_slack", sweep.min_weak_slack);
    r.certify("sweep", sweep.instances == 500 && sweep.weak_violations == 0 && sweep.identity_failures == 0,
              "the weak bound holds on 500 random constant-distance instances in H_d, d <= 8",
              Json{{"violations", sweep.weak_violations}, {"identity_failures", sweep.identity_failures}});
    return r;
}

ExperimentReport almost_curved(std::uint64_t seed)
{
    ExperimentReport r;
    auto sweep = weak_curvature_sweep(500, 8, derive(seed, 10));
    r.quantity("sweep/min_almost_slack", sweep.min_almost_slack);
    r.certify("sweep", sweep.instances == 500 && sweep.almost_violations == 0,
              "S_C - S_A/3 - S_B/3 - 2 W2^2 / (5 d^3) + 2/3 >= 0 on the 500-instance sweep",
              Json{{"violations", sweep.almost_violations}});
    auto fails = c_r_bound_failures(60);
    r.certify("c_r-growth", fails.empty(), "ln|C_R| >= 0.6 R - 1 for 1 <= R <= 60", fails);
    return r;
}

Distribution random_distribution(const MetricSpace& s, Rng& rng, std::size_t max_support)
{
    std::size_t k = 1 + rng.below(max_support);
    std::vector<long> w;
    long total = 0;
    for (std::size_t i = 0; i < k; ++i) {
        w.push_back(1 + static_cast<long>(rng.below(5)));
        total += w.back();
    }
    std::vector<std::pair<std::size_t, Rational>> e;
    for (std::size_t i = 0; i < k; ++i) e.emplace_back(rng.below(s.size()), Rational(w[i], total));
    return Distribution::make(s, std::move(e));
}

Rational plan_cost(const TransportPlan& p)
{
    Rational c = 0;
    for (std::size_t i = 0; i < p.rows(); ++i)
        for (std::size_t j = 0; j < p.cols(); ++j) c += p.exact[i * p.cols() + j] * (p.dist(i, j) * p.dist(i, j));
    return c;
}

// A random vertex of the transportation polytope: north-west corner after
// shuffling rows and columns.
TransportPlan random_vertex(const Distribution& a, const Distribution& b, Rng& rng)
{
    std::vector<std::size_t> ri(a.size()), ci(b.size());
    std::iota(ri.begin(), ri.end(), 0);
    std::iota(ci.begin(), ci.end(), 0);
    std::shuffle(ri.begin(), ri.end(), rng);
    std::shuffle(ci.begin(), ci.end(), rng);
    std::vector<Rational> x(a.size() * b.size(), 0), ra = a.mass, cb = b.mass;
    std::size_t i = 0, j = 0;
    while (i < ri.size() && j < ci.size()) {
        Rational q = std::min(ra[ri[i]], cb[ci[j]]);
        x[ri[i] * b.size() + ci[j]] += q;
        ra[ri[i]] -= q;
        cb[ci[j]] -= q;
        if (ra[ri[i]] == 0) ++i;
        else ++j;
    }
    return make_plan(a, b, x);
}

ExperimentReport transport_core(std::uint64_t seed)
{
    ExperimentReport r;
    Rng rng(derive(seed, 12));
    auto h3 = hypercube(3);
    std::size_t optimal = 0, suboptimal = 0, disagree = 0, forest_bad = 0;
    for (int trial = 0; trial < 200; ++trial) {
        auto a = random_distribution(h3, rng, 6), b = random_distribution(h3, rng, 6);
        auto w = wasserstein(a, b);
        auto plan = random_vertex(a, b, rng);
        bool is_opt = plan_cost(plan) == *w.exact;
        (is_opt ? optimal : suboptimal)++;
        disagree += is_cyclically_monotone(plan, 0).monotone != is_opt;
        disagree += !is_cyclically_monotone(w.plan, 0).monotone;
        auto forest = acyclic_optimal_transport(a, b);
        forest_bad += !(support_is_forest(forest) && is_transportation(forest) && plan_cost(forest) == *w.exact);
    }
    r.quantity("instances", 200);
    r.quantity("optimal_vertices", optimal);
    r.quantity("suboptimal_vertices", suboptimal);
    r.certify("optimal-iff-monotone", disagree == 0,
              "a plan is optimal iff it is cyclically monotone, on 200 random instances with supports <= 6",
              Json{{"disagreements", disagree}});
    r.certify("forest", forest_bad == 0, "forest transport has forest support and the optimal cost",
              Json{{"failures", forest_bad}});
    return r;
}

ExperimentReport strong_convexity(std::uint64_t)
{
    ExperimentReport r;
    auto sweep = strong_convexity_exhaustive(7);
    r.quantity("graphs", sweep.graphs);
    r.quantity("recognized", sweep.recognized);
    r.quantity("unverified_witnesses", sweep.unverified_witnesses);
    Json bad = Json::array();
    for (const auto& e : sweep.disagreeing) bad.push_back(e);
    r.certify("recognizer-agrees", sweep.disagreements == 0,
              "family recognizer and local-obstruction test agree on every connected graph with n <= 7", bad);
    return r;
}

ExperimentReport permutation(std::uint64_t)
{
    ExperimentReport r;
    auto p5 = permutation_variance(5);
    auto p7 = permutation_variance(7);
    r.quantity("exact/5", to_json(p5.exact));
    r.quantity("formula/5", to_json(p5.formula));
    r.quantity("exact/7", to_json(p7.exact));
    r.quantity("formula/7", to_json(p7.formula));
    r.quantity("corrected/7", to_json(p7.corrected));
    r.certify("n=5", p5.exact == Rational(33, 25), "exhaustive variance at n = 5 is 1.32",
              Json{{"exact", to_string(p5.exact)}});
    r.certify("n=7", p7.matches, "exhaustive variance at n = 7 equals the closed form",
              Json{{"exact", to_string(p7.exact)}, {"formula", to_string(p7.formula)}});
    return r;
}

ExperimentReport level_sets(std::uint64_t)
{
    ExperimentReport r;
    Json bad = Json::array();
    std::size_t heuristic = 0;
    for (int n = 3; n <= 12; ++n)
        for (int rr = 0; rr <= 2; ++rr) {
            if ((n - rr) % 2) continue;
            auto ls = level_set_sigma(n, rr);
            const std::string name = std::to_string(n) + "," + std::to_string(rr);
            r.quantity("sigma2/" + name, ls.sigma2, ls.exhaustive ? Tag::estimate : Tag::lower_estimate);
            r.quantity("bound/" + name, ls.bound, Tag::bound);
            heuristic += !ls.exhaustive;
            if (!ls.below) bad.push_back(name);
        }
    r.quantity("lower_estimates", heuristic);
    r.certify("different-level-sets", bad.empty(), "grid sigma^2 of the two-level spaces is at most n - 1 + r^2/4",
              bad);
    auto search = levels_adversarial_search(10);
    r.quantity("search/rows", search.rows.size());
    Json viol = Json::array();
    for (const auto& row : search.rows)
        if (row.violated) viol.push_back(Json{{"k", row.k}, {"r", row.r}, {"t", row.t}, {"best_a", row.best_a}});
    r.certify("concentration-on-levels", search.violations == 0,
              "no (A, B) with |A| <= |B| and d(A, B) >= t beats the levels bound for k <= 10", viol);
    return r;
}

ExperimentReport bm_scans(std::uint64_t seed)
{
    ExperimentReport r;
    ScanOptions opt;
    opt.samples = 10000;
    opt.seed = derive(seed, 16);
    struct Case {
        std::string name;
        MetricSpace space;
    };
    std::vector<Case> cases{{"hypercube:10", hypercube(10)},
                            {"product:l0:complete:3*complete:4*complete:2",
                             product({family("complete", {3}), family("complete", {4}), family("complete", {2})},
                                     ProductMetric::l0)}};
    for (const auto& c : cases) {
        auto rep = bm_scan(c.space, opt);
        r.quantity("min_k_hat/" + c.name, rep.min_k_hat, Tag::sampled);
        r.quantity("threshold/" + c.name, rep.threshold);
        Json w = nullptr;
        if (!rep.below.empty()) w = Json{{"S", rep.below[0].S}, {"T", rep.below[0].T}};
        r.certify(c.name, rep.samples == opt.samples && rep.below.empty(),
                  "K_hat >= 1/(2d) on every sample with d_* >= 2", w);
    }
    return r;
}

ExperimentReport expander(std::uint64_t seed)
{
    ExperimentReport r;
    auto pet = petersen_graph();
    auto rep = expander_midpoints(pet, {0}, {7});
    r.quantity("lambda2", rep.lambda2);
    r.quantity("lambda_abs", rep.lambda_abs);
    r.certify("petersen-lambda", std::abs(rep.lambda2 - 1.0 / 3) <= 1e-9,
              "the second eigenvalue of the normalized Petersen adjacency is 1/3 within 1e-9");
    auto mix = mixing_lemma_check(pet, 1000, derive(seed, 17));
    r.quantity("mixing/worst_ratio", mix.worst_ratio, Tag::sampled);
    r.certify("mixing-lemma", mix.pairs == 1000 && mix.violations == 0,
              "|e(X, Y) - d|X||Y|/n| <= lambda d sqrt(|X||Y|) on 1000 random set pairs",
              Json{{"violations", mix.violations}});
    return r;
}

ExperimentReport geodesics(std::uint64_t seed)
{
    ExperimentReport r;
    struct Case {
        std::string name;
        Graph g;
    };
    std::vector<Case> cases{{"cycle:6", cycle_graph(6)},
                            {"complete_minus_edge:4", complete_minus_edge(4)},
                            {"powerlaw:100:2.5:" + std::to_string(seed), power_law_graph(100, 2.5, seed)}};
    std::uint64_t stream = 0;
    for (const auto& c : cases)
        for (auto v : {WeightVariant::interior, WeightVariant::endpoint}) {
            const std::string name = c.name + "/variant=" + std::to_string(static_cast<int>(v));
            auto law = exact_midpoint_law(c.g, v);
            r.quantity("ratio_spread/" + name, law.ratio_spread);
            r.quantity("excluded_mass/" + name, to_json(law.excluded_mass));
            r.certify("exact/" + name, law.proportional,
                      "the exact midpoint law is proportional to degree on the attaining vertices",
                      Json{{"ratio_spread", law.ratio_spread}});
            auto mc = mc_teleport_walk(c.g, 0.99, 1000000, derive(seed, 18 * 16 + stream++), v);
            r.quantity("mc/accepted/" + name, mc.accepted, Tag::sampled);
            r.quantity("mc/min_p_value/" + name, mc.min_p_value, Tag::sampled);
            r.certify("mc/" + name, mc.matches,
                      "Monte Carlo midpoint tallies match the exact law at 3 sigma, family-wise",
                      Json{{"outside_3sigma", mc.outside_3sigma}});
        }
    return r;
}

}  // namespace

const std::vector<Criterion>& criteria()
{
    static const std::vector<Criterion> list{
        {1, "subgaussian-closed-forms", "subgaussian constants of K2, K3, K2xK2, S2", true, subgaussian_closed_forms},
        {2, "spread-below-sigma", "c^2 <= sigma^2 on small families", false, spread_below_sigma},
        {3, "odd-cycles", "odd-cycle optimality on C5 and C7", true, odd_cycles},
        {4, "tripod", "unbalanced tripod, k = 6", true, tripod},
        {5, "caterpillar", "caterpillar containment, k = 4, n = 1, 2", true, caterpillar},
        {6, "six-vertex", "six-vertex log-moment comparison", true, six_vertex},
        {7, "cube-convexity", "convex sets of H_4 are intervals", false, cube_convexity},
        {8, "iterated-midpoints", "two convex sets in H_12", true, iterated_midpoints},
        {9, "negative-curvature", "diagonal plan in H_10", true, negative_curvature},
        {10, "max-entropy", "max-entropy plan and weak curvature", true, max_entropy_restoration},
        {11, "almost-curved", "almost-curved slack and |C_R| growth", false, almost_curved},
        {12, "transport-core", "cyclical monotonicity and forest transport", false, transport_core},
        {13, "strong-convexity", "strong convexity recognizer, n <= 7", false, strong_convexity},
        {14, "permutation-variance", "permutation variance, n = 5, 7", true, permutation},
        {15, "level-sets", "level-set bounds and adversarial search", false, level_sets},
        {16, "bm-scan", "Brunn-Minkowski scans on H_10 and an l0 product", false, bm_scans},
        {17, "expander", "Petersen spectrum and mixing lemma", true, expander},
        {18, "random-geodesics", "degree-proportional midpoint law", false, geodesics},
    };
    return list;
}

std::vector<const Criterion*> select_criteria(const std::string& name)
{
    if (name != "paper-examples" && name != "invariants" && name != "all") throw Error("bad-suite", name);
    std::vector<const Criterion*> out;
    for (const auto& c : criteria())
        if (name == "all" || c.example == (name == "paper-examples")) out.push_back(&c);
    return out;
}

std::vector<CriterionResult> run_criteria(const std::vector<const Criterion*>& list, std::uint64_t seed, int threads,
                                          const std::function<void(const CriterionResult&)>& done)
{
    std::vector<CriterionResult> results(list.size());
    std::atomic<std::size_t> next{0};
    std::mutex lock;
    auto worker = [&] {
        for (std::size_t i; (i = next++) < list.size();) {
            auto& res = results[i];
            res.criterion = list[i];
            auto start = std::chrono::steady_clock::now();
            try {
                res.report = list[i]->run(seed);
            } catch (const std::exception& e) {
                res.error = e.what();
            }
            res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            if (done) {
                std::lock_guard<std::mutex> g(lock);
                done(res);
            }
        }
    };
    const int n = std::max(1, std::min<int>(threads, static_cast<int>(list.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return results;
}

ExperimentReport suite_report(const std::vector<CriterionResult>& results)
{
    ExperimentReport r;
    for (const auto& res : results) {
        const auto& c = *res.criterion;
        const std::string prefix = std::to_string(c.id) + "-" + c.slug;
        r.merge(res.report, prefix);
        if (!res.error.empty()) r.certify(prefix + "/error", false, "the criterion ran to completion", res.error);
    }
    return r;
}

}  // namespace lipcurv
