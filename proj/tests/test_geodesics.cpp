#include "doctest.h"

#include "lipcurv/families.hpp"
#include "lipcurv/geodesics.hpp"

#include <functional>

using namespace lipcurv;

namespace {

// Materializes every shortest path between ordered pairs and weights it directly.
std::vector<Rational> brute_law(const Graph& g, WeightVariant variant, Rational c = 1)
{
    std::vector<std::vector<int>> dist(g.n);
    for (int x = 0; x < g.n; ++x) dist[x] = bfs(g, x);
    std::vector<Rational> law(g.n, Rational(0));
    Rational total = 0;
    for (int x = 0; x < g.n; ++x)
        for (int y = 0; y < g.n; ++y) {
            const int L = dist[x][y];
            if (L == 0 || L % 2) continue;
            std::vector<int> path{x};
            std::function<void()> walk = [&] {
                int u = path.back();
                if (u == y) {
                    Rational w = 1;
                    if (variant == WeightVariant::interior) {
                        for (std::size_t i = 1; i + 1 < path.size(); ++i) w /= g.degree(path[i]);
                    } else {
                        w = g.degree(x) + g.degree(y);
                        for (int v : path) w /= g.degree(v) + 1;
                    }
                    for (int i = 0; i < L; ++i) w *= c;
                    law[path[L / 2]] += w;
                    total += w;
                    return;
                }
                for (int v : g.adj[u])
                    if (dist[x][v] == dist[x][u] + 1 && dist[v][y] == dist[u][y] - 1) {
                        path.push_back(v);
                        walk();
                        path.pop_back();
                    }
            };
            walk();
        }
    if (total > 0)
        for (auto& w : law) w /= total;
    return law;
}

}  // namespace

TEST_CASE("exact midpoint law against path enumeration")
{
    for (const auto& g : {cycle_graph(6), complete_minus_edge(4), path_graph(5), star_graph(4), petersen_graph(),
                          tripod_graph(2), power_law_graph(20, 2.5, 3)})
        for (auto v : {WeightVariant::interior, WeightVariant::endpoint}) {
            CHECK(exact_midpoint_law(g, v).law == brute_law(g, v));
            CHECK(exact_midpoint_law(g, v, Rational(9, 10)).law == brute_law(g, v, Rational(9, 10)));
        }
}

TEST_CASE("midpoint law examples")
{
    auto k3 = exact_midpoint_law(complete_graph(3), WeightVariant::interior);
    CHECK(k3.no_even_geodesics);
    CHECK_FALSE(k3.proportional);
    CHECK(k3.unattained.size() == 3);
    CHECK(k3.excluded_mass == 1);

    for (auto v : {WeightVariant::interior, WeightVariant::endpoint}) {
        auto c6 = exact_midpoint_law(cycle_graph(6), v);
        CHECK(c6.proportional);
        for (const auto& p : c6.law) CHECK(p == Rational(1, 6));
        CHECK(c6.even_geodesics == 12);  // ordered pairs at distance 2, one geodesic each

        auto star = exact_midpoint_law(star_graph(4), v);
        CHECK(star.law[0] == 1);
        CHECK(star.attaining == std::vector<int>{0});
        CHECK(star.proportional);

        auto kme = exact_midpoint_law(complete_minus_edge(4), v);
        CHECK(kme.proportional);
        CHECK(kme.attaining.size() == 2);
    }

    // P_5, variant 1: midpoints 1, 2, 3 carry 1/2, 1/2 + 1/8, 1/2 (each pair in both orders).
    auto p5 = exact_midpoint_law(path_graph(5), WeightVariant::interior);
    CHECK_FALSE(p5.proportional);
    CHECK(p5.law[1] == Rational(4, 13));
    CHECK(p5.law[2] == Rational(5, 13));
    CHECK(p5.ratio_spread == doctest::Approx(0.25));
    CHECK(exact_midpoint_law(path_graph(5), WeightVariant::endpoint).proportional);

    CHECK_THROWS_AS(parse_weight_variant("3"), Error);
    CHECK(parse_weight_variant("2") == WeightVariant::endpoint);
}

TEST_CASE("teleport walk")
{
    std::vector<std::vector<int>> dist;
    auto c6 = cycle_graph(6);
    for (int x = 0; x < 6; ++x) dist.push_back(bfs(c6, x));
    CHECK(is_geodesic_segment(dist, {0, 1, 2}));
    CHECK_FALSE(is_geodesic_segment(dist, {0, 1, 0}));
    CHECK_FALSE(is_geodesic_segment(dist, {0, 1, 2, 3, 4}));

    auto w = mc_teleport_walk(c6, 0.9, 1000000, 5);
    CHECK(w.accepted > 1000);
    CHECK(w.matches);
    CHECK(w.occupancy_degree_proportional);
    CHECK(w.segments == w.trivial + w.rejected + w.odd + w.accepted);

    // Variant 2 keeps a stationary law that is not proportional to degree.
    auto star = mc_teleport_walk(star_graph(4), 0.9, 200000, 5, WeightVariant::endpoint);
    CHECK(star.occupancy_stationary);
    CHECK_FALSE(star.occupancy_degree_proportional);
    CHECK(star.stationary[0] != doctest::Approx(0.5));
    auto p5 = mc_teleport_walk(path_graph(5), 0.9, 200000, 5);
    CHECK(p5.occupancy_degree_proportional);
    CHECK(p5.matches);

    CHECK_THROWS_AS(mc_teleport_walk(c6, 1.0, 1000000, 1), Error);
    CHECK_THROWS_AS(mc_teleport_walk(c6, 0.9, 10, 1), Error);

    auto conv = mc_convergence(c6, 0.9, 100000, 2, 5, 9);
    CHECK(conv.median_distance.size() == 2);
    CHECK(conv.decreasing);
}
