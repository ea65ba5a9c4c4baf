#include "doctest.h"

#include "lipcurv/families.hpp"
#include "lipcurv/hypercube.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

using namespace lipcurv;

namespace {

// Direct scan over all points.
std::vector<std::size_t> scan_layer(const MetricSpace& s, std::size_t a, std::size_t b, int k)
{
    std::vector<std::size_t> out;
    int r = s.dist(a, b);
    for (std::size_t u = 0; u < s.size(); ++u)
        if (s.dist(a, u) == k && s.dist(u, b) == r - k) out.push_back(u);
    return out;
}

bool brute_interval(const VertexSet& S)
{
    const int d = S.space->cube_dim();
    const std::size_t n = std::size_t{1} << d;
    for (std::size_t lo = 0; lo < n; ++lo)
        for (std::size_t hi = 0; hi < n; ++hi) {
            if ((lo & hi) != lo) continue;
            bool same = true;
            for (std::size_t g = 0; g < n && same; ++g) same = S.contains(g) == ((g & lo) == lo && (g | hi) == hi);
            if (same) return true;
        }
    return false;
}

bool brute_convex(const VertexSet& S)
{
    const MetricSpace& s = *S.space;
    auto pts = S.points();
    for (auto a : pts)
        for (auto b : pts) {
            int r = s.dist(a, b);
            for (int k : {r / 2, (r + 1) / 2})
                for (auto u : scan_layer(s, a, b, k))
                    if (!S.contains(u)) return false;
        }
    return true;
}

std::uint64_t choose(int n, int k)
{
    std::uint64_t c = 1;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

MetricSpace mixed_l0()
{
    return product({parse_space("complete:3"), parse_space("complete:4"), parse_space("complete:2")}, ProductMetric::l0);
}

}  // namespace

TEST_CASE("hat midpoints")
{
    auto h2 = hypercube(2);
    CHECK(midpoints_hat(h2, 0, 3) == std::vector<std::size_t>{1, 2});
    auto h6 = hypercube(6);
    auto l0 = mixed_l0();
    for (const MetricSpace* s : {&h6, &l0})
        for (std::size_t a = 0; a < s->size(); a += 3)
            for (std::size_t b = 0; b < s->size(); ++b)
                for (int k = 0; k <= s->dist(a, b); ++k) CHECK(geodesic_layer(*s, a, b, k) == scan_layer(*s, a, b, k));

    auto h5 = hypercube(5);
    for (Rational rho : {Rational(1, 4), Rational(1, 3), Rational(1, 2), Rational(2, 5)})
        for (std::size_t a = 0; a < 32; ++a)
            for (std::size_t b = 0; b < 32; ++b) {
                auto m = midpoints_hat(h5, a, b, rho);
                CHECK(m == midpoints_hat(h5, b, a, rho));
                // Swapping rho with 1 - rho moves the rounding: the layers
                // become ceil(rho d) and floor((1 - rho) d).
                int d = h5.dist(a, b);
                auto fl = [](const Rational& x) { return static_cast<int>(std::floor(to_double(x))); };
                auto ce = [](const Rational& x) { return static_cast<int>(std::ceil(to_double(x))); };
                std::set<int> mine{fl(rho * d), ce((1 - rho) * d)}, swapped{ce(rho * d), fl((1 - rho) * d)};
                CHECK((m == midpoints_hat(h5, b, a, 1 - rho)) == (mine == swapped));
                for (auto u : m) CHECK(h5.dist(a, u) + h5.dist(u, b) == h5.dist(a, b));
            }
    CHECK_THROWS_AS(midpoints_hat(h5, 0, 1, Rational(1)), Error);
}

TEST_CASE("tilde midpoints")
{
    auto h3 = hypercube(3);
    CHECK(midpoints_tilde(h3, 5, 5) == std::vector<MidpointAtom>{MidpointAtom::point(5)});
    auto k2 = MetricSpace::from_graph(complete_graph(2));
    CHECK(midpoints_tilde(k2, 0, 1) == std::vector<MidpointAtom>{MidpointAtom::edge(0, 1)});
    auto edges = midpoints_tilde(h3, 0, 7);
    CHECK(edges.size() == 6);
    for (const auto& e : edges) {
        CHECK(e.is_edge());
        CHECK(std::popcount(e.u) == 1);
        CHECK(std::popcount(e.v) == 2);
        CHECK((e.u & e.v) == e.u);
    }
    // Edge counts between the middle levels: C(2i+1, i) (i+1).
    for (int i = 0; i <= 4; ++i) {
        int R = 2 * i + 1;
        auto h = hypercube(R);
        CHECK(midpoints_tilde(h, 0, (std::size_t{1} << R) - 1).size() == choose(R, i) * (i + 1));
    }
    auto c7 = MetricSpace::from_graph(cycle_graph(7));
    CHECK(midpoints_tilde(c7, 0, 3) == std::vector<MidpointAtom>{MidpointAtom::edge(1, 2)});
    auto levels = parse_space("levels:4:1,2");
    std::size_t odd_a = 0, odd_b = 0;
    for (std::size_t b = 0; b < levels.size(); ++b)
        if (levels.dist(0, b) == 3) odd_b = b;
    REQUIRE(odd_b != odd_a);
    try {
        midpoints_tilde(levels, odd_a, odd_b);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == "no-edge-atoms");
    }
}

TEST_CASE("convex sets are intervals in H_4")
{
    auto h4 = hypercube(4);
    std::size_t convex = 0;
    for (std::uint32_t mask = 1; mask < (1u << 16); ++mask) {
        VertexSet S = VertexSet::empty(h4);
        for (int p = 0; p < 16; ++p) S.member[p] = mask >> p & 1;
        bool c = is_convex(S);
        CHECK(c == is_interval(S));
        if (mask % 97 == 0) CHECK(c == brute_convex(S));
        if (mask % 251 == 0) CHECK(is_interval(S) == brute_interval(S));
        convex += c;
    }
    // Intervals of H_4: 3^4.
    CHECK(convex == 81);
}

TEST_CASE("convexity, sampled up to d = 8")
{
    Rng rng(3);
    for (int d = 5; d <= 8; ++d) {
        auto h = hypercube(d);
        for (int trial = 0; trial < 40; ++trial) {
            std::uint64_t hi = rng.below(std::uint64_t{1} << d), lo = hi & rng.below(std::uint64_t{1} << d);
            VertexSet S = interval(h, lo, hi);
            CHECK(is_convex(S));
            VertexSet T = S;
            std::size_t p = rng.below(h.size());
            T.member[p] = !T.member[p];
            if (T.count() > 0) CHECK(is_convex(T) == is_interval(T));
            VertexSet C = convex_closure(T.count() ? T : S);
            CHECK(is_convex(C));
            CHECK(convex_closure(C) == C);
        }
    }
}

TEST_CASE("convex closure")
{
    auto h3 = hypercube(3);
    auto c = convex_closure(VertexSet::of(h3, {1, 2}));
    CHECK(c.points() == std::vector<std::size_t>{0, 1, 2, 3});
    CHECK(is_convex(VertexSet::of(h3, {6})));
    CHECK_FALSE(is_convex(ball(VertexSet::of(h3, {0}), 1)));
    for (int d = 3; d <= 5; ++d) {
        auto h = hypercube(d);
        CHECK(convex_closure(ball(VertexSet::of(h, {0}), 1)).count() == h.size());
    }
    auto h6 = hypercube(6);
    Rng rng(9);
    for (int trial = 0; trial < 30; ++trial) {
        VertexSet A = VertexSet::empty(h6), B = VertexSet::empty(h6);
        for (int k = 0; k < 1 + static_cast<int>(rng.below(3)); ++k) A.member[rng.below(64)] = 1;
        for (int k = 0; k < 1 + static_cast<int>(rng.below(3)); ++k) B.member[rng.below(64)] = 1;
        auto C = convex_closure(midpoints_hat(A, B));
        CHECK(C.includes(A));
        CHECK(C.includes(B));
    }
    // Off the cube only the fixpoint is computed.
    auto c6 = MetricSpace::from_graph(cycle_graph(6));
    auto cc = convex_closure(VertexSet::of(c6, {0, 2}));
    CHECK(is_convex(cc));
    CHECK(cc.points() == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("two convex sets in H_12")
{
    auto rep = iterated_midpoint_counterexample();
    CHECK(rep.size_a == 16);
    CHECK(rep.size_b == 16);
    CHECK(rep.a_convex);
    CHECK(rep.b_convex);
    CHECK(rep.phi_is_midpoint);
    CHECK(rep.zeta_is_iterated);
    CHECK(std::popcount(rep.zeta) == 9);
    CHECK_FALSE(rep.zeta_in_half);
    CHECK_FALSE(rep.zeta_in_quarter);
    CHECK(rep.half_levels == std::pair{4, 8});
    CHECK(rep.quarter_levels == std::pair{2, 6});
    // The two-sided quarter midpoints also keep the 3/4 layer.
    CHECK(rep.hat_quarter_levels == std::pair{2, 10});
    CHECK(rep.zeta_in_hat_quarter);
    CHECK(rep.inner_strictly_contains);
    CHECK(rep.outer_strictly_contains);
    CHECK_FALSE(rep.outer_contains_hat_quarter);
}

TEST_CASE("curvature estimates")
{
    auto h = hypercube(10);
    for (int r = 1; r <= 10; ++r) {
        std::size_t b = (std::size_t{1} << r) - 1;
        auto est = bm_curvature(VertexSet::of(h, {0}), VertexSet::of(h, {b}));
        CHECK(est.d_star == r);
        std::uint64_t layer = choose(r, r / 2);
        CHECK(est.midpoints == (r % 2 == 0 ? layer : 2 * layer));
        CHECK(*est.k_hat == doctest::Approx(8 * std::log(static_cast<double>(est.midpoints)) / (r * r)));
    }
    auto same = bm_curvature(VertexSet::of(h, {3, 5}), VertexSet::of(h, {3, 5}));
    CHECK(same.d_star == 0);
    CHECK_FALSE(same.k_hat.has_value());

    ScanOptions opt;
    opt.samples = 1000;
    auto rep = bm_scan(h, opt);
    CHECK(rep.samples == 1000);
    CHECK(rep.dimension == 10);
    CHECK(rep.below.empty());
    CHECK(rep.min_k_hat >= 1.0 / 20);
    auto again = bm_scan(h, opt);
    CHECK(again.min_k_hat == rep.min_k_hat);

    auto l0 = mixed_l0();
    auto rep0 = bm_scan(l0, opt);
    CHECK(rep0.dimension == 3);
    CHECK(rep0.below.empty());
    CHECK_THROWS_AS(bm_scan(MetricSpace::from_graph(cycle_graph(5)), opt), Error);
}

TEST_CASE("phi map")
{
    auto h6 = hypercube(6);
    auto l0 = mixed_l0();
    Rng rng(21);
    for (const MetricSpace* s : {&h6, &l0}) {
        int d = l0_dimension(*s);
        for (int trial = 0; trial < 20; ++trial) {
            VertexSet S = VertexSet::empty(*s), T = VertexSet::empty(*s);
            for (int k = 0; k < 4; ++k) S.member[rng.below(s->size())] = 1;
            for (int k = 0; k < 4; ++k) T.member[rng.below(s->size())] = 1;
            for (Rational rho : {Rational(1, 2), Rational(1, 3)})
                for (int r = 0; r <= d; ++r) {
                    auto rep = phi_injection_check(S, T, rho, r);
                    CHECK(rep.distances_ok);
                    CHECK(rep.in_midpoints);
                    CHECK(rep.inverts);
                    CHECK(rep.injective_per_class);
                    CHECK(rep.max_preimages <= rep.classes);
                }
        }
    }
    auto rep = phi_injection_check(VertexSet::of(h6, {0}), VertexSet::of(h6, {63}), Rational(1, 2), 6);
    CHECK(rep.pairs == 1);
    CHECK(rep.classes == 20);
    CHECK(rep.images == 20);
}
