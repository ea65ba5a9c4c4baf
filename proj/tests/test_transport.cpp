#include "doctest.h"

#include "lipcurv/families.hpp"
#include "lipcurv/transport.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace lipcurv;

namespace {

std::size_t bit(int element) { return std::size_t{1} << (element - 1); }

// A = {{1}..{k}}, B = {{k+1}..{2k}} in H_{2k}, uniform.
struct NegativeInstance {
    MetricSpace h;
    Distribution A, B;
    explicit NegativeInstance(int k) : h(hypercube(2 * k))
    {
        std::vector<std::size_t> a, b;
        for (int i = 1; i <= k; ++i) {
            a.push_back(bit(i));
            b.push_back(bit(k + i));
        }
        A = Distribution::uniform(h, a);
        B = Distribution::uniform(h, b);
    }
    TransportPlan diagonal() const
    {
        const std::size_t k = A.size();
        std::vector<Rational> x(k * k, 0);
        for (std::size_t i = 0; i < k; ++i) x[i * k + i] = Rational(1, static_cast<long>(k));
        return make_plan(A, B, x);
    }
};

Distribution random_distribution(const MetricSpace& s, Rng& rng, std::size_t max_support)
{
    std::size_t k = 1 + rng.below(max_support);
    std::vector<std::pair<std::size_t, Rational>> e;
    long total = 0;
    std::vector<long> w;
    for (std::size_t i = 0; i < k; ++i) {
        w.push_back(1 + static_cast<long>(rng.below(5)));
        total += w.back();
    }
    for (std::size_t i = 0; i < k; ++i) e.emplace_back(rng.below(s.size()), Rational(w[i], total));
    return Distribution::make(s, std::move(e));
}

// Minimum over permutations; equals the optimum for uniform marginals of equal size.
long long assignment_oracle(const MetricSpace& s, const std::vector<std::size_t>& a, const std::vector<std::size_t>& b)
{
    std::vector<std::size_t> perm(b.size());
    std::iota(perm.begin(), perm.end(), 0);
    long long best = -1;
    do {
        long long c = 0;
        for (std::size_t i = 0; i < a.size(); ++i) c += static_cast<long long>(s.dist(a[i], b[perm[i]])) * s.dist(a[i], b[perm[i]]);
        if (best < 0 || c < best) best = c;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

// Optimality certificate independent of the solver: dual feasibility and a
// zero duality gap.
bool dual_certifies(const WassersteinResult& w, int order)
{
    const auto& p = w.plan;
    double dual = 0;
    for (std::size_t i = 0; i < p.rows(); ++i) dual += to_double(p.source.mass[i]) * w.u[i];
    for (std::size_t j = 0; j < p.cols(); ++j) dual += to_double(p.target.mass[j]) * w.v[j];
    for (std::size_t i = 0; i < p.rows(); ++i)
        for (std::size_t j = 0; j < p.cols(); ++j) {
            double c = order == 1 ? p.dist(i, j) : p.dist(i, j) * p.dist(i, j);
            if (w.u[i] + w.v[j] > c + 1e-9) return false;
        }
    return std::abs(dual - w.value) < 1e-9;
}

Rational plan_cost(const TransportPlan& p)
{
    Rational c = 0;
    for (std::size_t i = 0; i < p.rows(); ++i)
        for (std::size_t j = 0; j < p.cols(); ++j) c += p.exact[i * p.cols() + j] * (p.dist(i, j) * p.dist(i, j));
    return c;
}

}  // namespace

TEST_CASE("point masses and identical marginals")
{
    auto c7 = MetricSpace::from_graph(cycle_graph(7));
    auto w = wasserstein(Distribution::point(c7, 0), Distribution::point(c7, 3), 2);
    CHECK(*w.exact == 9);
    CHECK(w.plan.support().size() == 1);
    CHECK(wasserstein(Distribution::point(c7, 0), Distribution::point(c7, 3), 1).value == 3);

    auto mu = Distribution::uniform(c7, {0, 2, 5});
    auto same = wasserstein(mu, mu);
    CHECK(*same.exact == 0);
    for (std::size_t i = 0; i < 3; ++i) CHECK(same.plan.exact[i * 3 + i] == Rational(1, 3));

    auto other = parse_space("cycle:7");
    CHECK_THROWS_AS(wasserstein(mu, Distribution::point(other, 0)), Error);
    CHECK_THROWS_AS(wasserstein(mu, mu, 3), Error);
    CHECK_THROWS_AS(Distribution::make(c7, {{0, Rational(1, 2)}}), Error);
    auto merged = Distribution::make(c7, {{4, Rational(1, 2)}, {4, Rational(1, 4)}, {1, Rational(1, 4)}});
    CHECK(merged.points == std::vector<std::size_t>{1, 4});
    CHECK(merged.mass[1] == Rational(3, 4));
}

TEST_CASE("random instances against oracles")
{
    Rng rng(5);
    auto h4 = hypercube(4);
    auto c8 = MetricSpace::from_graph(cycle_graph(8));
    for (int trial = 0; trial < 60; ++trial) {
        const MetricSpace& s = trial % 2 ? h4 : c8;
        // Uniform marginals of equal size: the assignment oracle.
        std::size_t k = 1 + rng.below(5);
        std::vector<std::size_t> a, b;
        while (a.size() < k) {
            auto p = rng.below(s.size());
            if (std::find(a.begin(), a.end(), p) == a.end()) a.push_back(p);
        }
        while (b.size() < k) {
            auto p = rng.below(s.size());
            if (std::find(b.begin(), b.end(), p) == b.end()) b.push_back(p);
        }
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        auto w = wasserstein(Distribution::uniform(s, a), Distribution::uniform(s, b));
        CHECK(*w.exact * static_cast<long>(k) == assignment_oracle(s, a, b));
        CHECK(is_transportation(w.plan));
        CHECK(dual_certifies(w, 2));

        auto A = random_distribution(s, rng, 6), B = random_distribution(s, rng, 6);
        for (int order : {1, 2}) {
            auto r = wasserstein(A, B, order);
            CHECK(is_transportation(r.plan));
            CHECK(dual_certifies(r, order));
            // Floating simplex agrees with the exact one.
            auto f = wasserstein(A, B, order, 0);
            CHECK_FALSE(f.exact.has_value());
            CHECK(f.value == doctest::Approx(r.value).epsilon(1e-12));
            CHECK(is_transportation(f.plan));
        }
    }
}

TEST_CASE("cyclical monotonicity")
{
    auto p4 = MetricSpace::from_graph(path_graph(4));
    auto A = Distribution::uniform(p4, {0, 1}), B = Distribution::uniform(p4, {2, 3});
    // 0 -> 3 and 1 -> 2 costs 9 + 1 against 4 + 4 for 0 -> 2, 1 -> 3.
    auto crossed = make_plan(A, B, std::vector<Rational>{0, Rational(1, 2), Rational(1, 2), 0});
    auto rep = is_cyclically_monotone(crossed);
    CHECK_FALSE(rep.monotone);
    CHECK(rep.cycle.size() == 2);
    CHECK(rep.excess == 2);
    auto opt = wasserstein(A, B);
    CHECK(*opt.exact == 4);
    CHECK(is_cyclically_monotone(opt.plan).monotone);
    CHECK(is_cyclically_monotone(make_plan(Distribution::point(p4, 0), Distribution::point(p4, 3), std::vector<Rational>{1})).monotone);

    // Optimal iff monotone, over random (possibly suboptimal) plans.
    Rng rng(8);
    auto h3 = hypercube(3);
    int optimal = 0, suboptimal = 0;
    for (int trial = 0; trial < 150; ++trial) {
        auto a = random_distribution(h3, rng, 4), b = random_distribution(h3, rng, 4);
        auto w = wasserstein(a, b);
        // Random vertex of the transportation polytope: NW corner after shuffling.
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
        auto plan = make_plan(a, b, x);
        REQUIRE(is_transportation(plan));
        bool is_opt = plan_cost(plan) == *w.exact;
        CHECK(is_cyclically_monotone(plan, 0).monotone == is_opt);
        (is_opt ? optimal : suboptimal)++;
    }
    CHECK(optimal > 10);
    CHECK(suboptimal > 10);
}

TEST_CASE("negative curvature instance")
{
    NegativeInstance ex(5);
    auto w = wasserstein(ex.A, ex.B);
    CHECK(*w.exact == 4);
    auto diag = ex.diagonal();
    CHECK(diag.w2 == 4);
    auto mu = interpolate(diag, Rational(1, 2));
    CHECK(mu.at(MidpointAtom::point(0)) == doctest::Approx(0.5));
    for (int i = 1; i <= 5; ++i) CHECK(mu.at(MidpointAtom::point(bit(i) | bit(5 + i))) == doctest::Approx(0.1));
    CHECK(mu.atoms.size() == 6);
    const double diag_entropy = std::log(5.0) / 2 + std::log(2.0);
    CHECK(std::abs(entropy(mu) - diag_entropy) < 1e-12);
    CHECK(entropy(ex.A) == doctest::Approx(std::log(5.0)));
    double slack = displacement_convexity_slack(diag, Rational(1, 2), 0);
    CHECK(slack == doctest::Approx(diag_entropy - std::log(5.0)));
    CHECK(slack < 0);

    auto me = max_entropy_optimal_plan(ex.A, ex.B);
    for (double x : me.mass) CHECK(std::abs(x - 1.0 / 25) < 1e-9);
    CHECK(entropy(me) == doctest::Approx(2 * std::log(5.0)));
    auto mc = interpolate(me, Rational(1, 2));
    CHECK(entropy(mc) == doctest::Approx(std::log(2.0) + std::log(5.0)).epsilon(1e-10));
    CHECK(displacement_convexity_slack(me, Rational(1, 2), 0) == doctest::Approx(std::log(2.0)));

    auto part = partition(diag);
    CHECK(part.parts.size() == 1);
    CHECK(part.constant_distances);
    auto large = everybody_is_large_check(me);
    CHECK(large.D == 2);
    CHECK(large.constant_distance);
    CHECK(large.all_pairs_far);
    CHECK(large.costs_match);
    CHECK(large.w2 == 4);

    auto prod = product_structure_check(me);
    CHECK(prod.shared_atoms == 1);
    CHECK(prod.atoms_shared);
    CHECK(prod.distances_equal);
    CHECK(prod.entries_positive);
    CHECK(prod.max_deviation < 1e-12);

    auto forest = acyclic_optimal_transport(ex.A, ex.B);
    CHECK(support_is_forest(forest));
    CHECK(forest.support().size() <= 9);
    CHECK(plan_cost(forest) == 4);
    CHECK(is_transportation(forest));
}

TEST_CASE("max-entropy plans")
{
    auto p3 = MetricSpace::from_graph(path_graph(3));
    auto pt = max_entropy_optimal_plan(Distribution::point(p3, 0), Distribution::point(p3, 2));
    CHECK(pt.mass == std::vector<double>{1.0});
    CHECK(entropy(pt) == 0);

    // The optimal face can be smaller than the zero-reduced-cost cells.
    Rng rng(12);
    auto h4 = hypercube(4);
    for (int trial = 0; trial < 40; ++trial) {
        auto a = random_distribution(h4, rng, 5), b = random_distribution(h4, rng, 5);
        auto me = max_entropy_optimal_plan(a, b);
        auto w = wasserstein(a, b);
        CHECK(me.w2 == doctest::Approx(w.value).epsilon(1e-9));
        CHECK(is_transportation(me));
        // Every basic optimal plan's support lies in the max-entropy support.
        auto verts = optimal_vertices(a, b);
        REQUIRE(verts.complete);
        for (const auto& v : verts.plans) {
            CHECK(plan_cost(v) == *w.exact);
            for (auto [i, j] : v.support()) CHECK(me.at(i, j) > 1e-12);
            CHECK(entropy(v) <= entropy(me) + 1e-9);
        }
        CHECK(product_structure_check(me, 1e-9).max_deviation < 1e-8);
    }
}

TEST_CASE("partitions")
{
    auto p9 = MetricSpace::from_graph(path_graph(9));
    auto a = Distribution::uniform(p9, {0, 8}), b = Distribution::uniform(p9, {2, 5});
    // 0 -> 2 at distance 2, 8 -> 5 at distance 3: disjoint midpoints.
    auto plan = make_plan(a, b, std::vector<Rational>{Rational(1, 2), 0, 0, Rational(1, 2)});
    auto part = partition(plan);
    REQUIRE(part.parts.size() == 2);
    CHECK(part.parts[0].distances == std::vector<int>{2});
    CHECK(part.parts[1].distances == std::vector<int>{3});
    CHECK(*part.parts[0].eta_exact == Rational(1, 2));
    CHECK_THROWS_AS(everybody_is_large_check(plan), Error);
    CHECK(partition(make_plan(Distribution::point(p9, 1), Distribution::point(p9, 4), std::vector<Rational>{1})).parts.size() == 1);

    // Components reconstitute the plan exactly, costs split linearly, and
    // each component of an optimal plan is "large".
    Rng rng(4);
    auto h5 = hypercube(5);
    for (int trial = 0; trial < 40; ++trial) {
        auto A = random_distribution(h5, rng, 5), B = random_distribution(h5, rng, 5);
        auto w = wasserstein(A, B);
        auto pr = partition(w.plan);
        CHECK(pr.constant_distances);
        std::vector<Rational> rebuilt(w.plan.exact.size(), 0);
        Rational w2 = 0;
        for (const auto& part : pr.parts) {
            const auto& tp = part.plan;
            for (std::size_t i = 0; i < tp.rows(); ++i)
                for (std::size_t j = 0; j < tp.cols(); ++j) {
                    auto ri = std::lower_bound(A.points.begin(), A.points.end(), tp.source.points[i]) - A.points.begin();
                    auto cj = std::lower_bound(B.points.begin(), B.points.end(), tp.target.points[j]) - B.points.begin();
                    rebuilt[ri * B.size() + cj] += *part.eta_exact * tp.exact[i * tp.cols() + j];
                }
            w2 += *part.eta_exact * plan_cost(tp);
            auto rep = everybody_is_large_check(tp);
            CHECK(rep.constant_distance);
            CHECK(rep.all_pairs_far);
            CHECK(rep.costs_match);
        }
        CHECK(rebuilt == w.plan.exact);
        CHECK(w2 == *w.exact);
    }
}

TEST_CASE("interpolation")
{
    auto h2 = hypercube(2);
    auto plan = make_plan(Distribution::point(h2, 0), Distribution::point(h2, 3), std::vector<Rational>{1});
    auto mid = interpolate(plan, Rational(1, 2));
    CHECK(mid.atoms == std::vector<MidpointAtom>{MidpointAtom::point(1), MidpointAtom::point(2)});
    CHECK(mid.mass == std::vector<double>{0.5, 0.5});
    CHECK(entropy(mid) == doctest::Approx(std::log(2.0)));

    // Geodesic counts on a cube: r!.  On a grid graph, binomials.
    auto c = geodesic_counts(hypercube(4), 0);
    CHECK(c[15] == 24);
    auto grid = MetricSpace::from_graph(cartesian_product(path_graph(3), path_graph(4)));
    auto g = geodesic_counts(grid, 0);
    CHECK(g[0] == 1);
    CHECK(*std::max_element(g.begin(), g.end()) == 10);  // corner to corner of 3 x 4: C(5, 2)

    Rng rng(2);
    auto c9 = MetricSpace::from_graph(cycle_graph(9));
    auto h5 = hypercube(5);
    for (int trial = 0; trial < 30; ++trial) {
        const MetricSpace& s = trial % 2 ? h5 : c9;
        auto A = random_distribution(s, rng, 4), B = random_distribution(s, rng, 4);
        auto w = wasserstein(A, B);
        for (Rational t : {Rational(0), Rational(1, 4), Rational(1, 3), Rational(1, 2), Rational(2, 3), Rational(1)}) {
            auto mu = interpolate(w.plan, t);
            double total = std::accumulate(mu.mass.begin(), mu.mass.end(), 0.0);
            CHECK(std::abs(total - 1.0) < 1e-12);
        }
        // Endpoints reproduce the marginals (t measures the distance from the source).
        auto mu0 = interpolate(w.plan, 0), mu1 = interpolate(w.plan, 1);
        for (std::size_t i = 0; i < A.size(); ++i) CHECK(mu0.at(MidpointAtom::point(A.points[i])) == doctest::Approx(to_double(A.mass[i])));
        for (std::size_t j = 0; j < B.size(); ++j) CHECK(mu1.at(MidpointAtom::point(B.points[j])) == doctest::Approx(to_double(B.mass[j])));
        // Identity plan, no curvature term: zero slack.
        auto self = wasserstein(A, A);
        CHECK(std::abs(displacement_convexity_slack(self.plan, Rational(1, 3), 0)) < 1e-12);
    }
    // Odd distance at t = 1/2 on C_7: a single edge atom.
    auto c7 = MetricSpace::from_graph(cycle_graph(7));
    auto odd = interpolate(make_plan(Distribution::point(c7, 0), Distribution::point(c7, 3), std::vector<Rational>{1}), Rational(1, 2));
    CHECK(odd.atoms == std::vector<MidpointAtom>{MidpointAtom::edge(1, 2)});
    CHECK(odd.mass[0] == doctest::Approx(1.0));
}

TEST_CASE("forest supports")
{
    auto k2 = MetricSpace::from_graph(complete_graph(2));
    auto u = Distribution::uniform(k2, {0, 1});
    auto all = make_plan(u, u, std::vector<Rational>(4, Rational(1, 4)));
    CHECK_FALSE(support_is_forest(all));
    // Equal costs between disjoint supports: one cancellation empties two cells.
    auto k4 = MetricSpace::from_graph(complete_graph(4));
    auto a = Distribution::uniform(k4, {0, 1}), b = Distribution::uniform(k4, {2, 3});
    auto prod = make_plan(a, b, std::vector<Rational>(4, Rational(1, 4)));
    auto f = cancel_cycles(prod);
    CHECK(support_is_forest(f));
    CHECK(f.support().size() == 2);
    CHECK(plan_cost(f) == plan_cost(prod));
    CHECK(is_transportation(f));

    Rng rng(6);
    auto h4 = hypercube(4);
    for (int trial = 0; trial < 50; ++trial) {
        auto A = random_distribution(h4, rng, 6), B = random_distribution(h4, rng, 6);
        auto w = wasserstein(A, B);
        auto me = max_entropy_optimal_plan(A, B);
        auto forest = acyclic_optimal_transport(A, B);
        CHECK(support_is_forest(forest));
        CHECK(plan_cost(forest) == *w.exact);
        CHECK(is_transportation(forest));
        CHECK(forest.support().size() <= A.size() + B.size() - 1);
        CHECK(forest_subset_bound(forest));
        CHECK(me.support().size() >= forest.support().size());
    }
}

TEST_CASE("vertex enumeration")
{
    // Uniform 3 x 3 with all costs equal: the 6 permutation matrices.
    auto k6 = MetricSpace::from_graph(complete_graph(6));
    auto a = Distribution::uniform(k6, {0, 1, 2}), b = Distribution::uniform(k6, {3, 4, 5});
    auto v = optimal_vertices(a, b);
    CHECK(v.complete);
    CHECK(v.plans.size() == 6);
    for (const auto& p : v.plans) CHECK(p.support().size() == 3);
    auto capped = optimal_vertices(a, b, 2);
    CHECK_FALSE(capped.complete);
    CHECK(capped.plans.size() == 2);
}
