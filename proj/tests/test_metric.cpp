#include "doctest.h"

#include "lipcurv/families.hpp"
#include "lipcurv/metric.hpp"

#include <algorithm>
#include <numeric>

using namespace lipcurv;

namespace {

std::string error_code(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return "";
}

}  // namespace

TEST_CASE("build_graph")
{
    Graph k2 = build_graph(2, {{0, 1}});
    CHECK(k2.edges.size() == 1);
    Graph c3 = build_graph(3, {{0, 1}, {1, 2}, {2, 0}, {1, 0}});
    CHECK(c3.edges.size() == 3);
    CHECK(error_code([] { build_graph(3, {{0, 1}}); }) == "disconnected");
    CHECK(error_code([] { build_graph(2, {{0, 0}, {0, 1}}); }) == "self-loop");
}

TEST_CASE("shortest path metric")
{
    auto k2 = shortest_path_metric(complete_graph(2));
    CHECK(k2.dist(0, 1) == 1);
    auto p3 = shortest_path_metric(path_graph(3));
    CHECK(p3.dist(0, 2) == 2);
    auto pet = shortest_path_metric(petersen_graph());
    CHECK(pet.diameter() == 2);
    for (int u = 0; u < 10; ++u) CHECK(pet.graph()->degree(u) == 3);
    CHECK(satisfies_metric_axioms(pet));
}

TEST_CASE("products")
{
    auto k2 = shortest_path_metric(complete_graph(2));
    auto sq = product({k2, k2}, ProductMetric::l1);
    CHECK(sq.size() == 4);
    CHECK(sq.diameter() == 2);
    auto p3 = shortest_path_metric(path_graph(3));
    auto l0 = product({p3, p3}, ProductMetric::l0);
    auto linf = product({p3, p3}, ProductMetric::linf);
    auto l1 = product({p3, p3}, ProductMetric::l1);
    std::size_t a = *l0.find("(0,0)"), b = *l0.find("(2,2)");
    CHECK(l0.dist(a, b) == 2);
    CHECK(linf.dist(a, b) == 2);
    CHECK(l1.dist(a, b) == 4);
    // l1 distance equals the coordinate sum, and the materialized graph agrees.
    auto c4 = shortest_path_metric(cycle_graph(4));
    auto mixed = product({p3, c4}, ProductMetric::l1);
    auto via_graph = MetricSpace::from_graph(*mixed.graph());
    for (std::size_t i = 0; i < mixed.size(); ++i)
        for (std::size_t j = 0; j < mixed.size(); ++j) {
            auto ci = mixed.coordinates(i), cj = mixed.coordinates(j);
            int expect = p3.dist(ci[0], cj[0]) + c4.dist(ci[1], cj[1]);
            CHECK(mixed.dist(i, j) == expect);
            CHECK(via_graph.dist(i, j) == expect);
        }
    CHECK(error_code([&] { product({hypercube(20), hypercube(20)}, ProductMetric::l1); }) == "too-large");
}

TEST_CASE("hypercube is a product of edges")
{
    auto k2 = shortest_path_metric(complete_graph(2));
    for (int d = 1; d <= 5; ++d) {
        std::vector<MetricSpace> f(d, k2);
        auto p = product(f, ProductMetric::l1);
        auto h = hypercube(d);
        // product index has the first factor most significant; bit i of the mask is element i+1.
        auto relabel = [d](std::size_t i) {
            std::size_t m = 0;
            for (int b = 0; b < d; ++b)
                if (i >> (d - 1 - b) & 1) m |= std::size_t{1} << b;
            return m;
        };
        for (std::size_t i = 0; i < p.size(); ++i)
            for (std::size_t j = 0; j < p.size(); ++j) CHECK(p.dist(i, j) == h.dist(relabel(i), relabel(j)));
    }
}

TEST_CASE("families")
{
    auto t = tripod_graph(2);
    CHECK(t.n == 9);
    int deg3 = 0;
    for (int u = 0; u < t.n; ++u) deg3 += t.degree(u) == 3;
    CHECK(deg3 == 1);
    auto c = caterpillar_graph(2);
    CHECK(c.n == 8);
    for (int i = 0; i < 4; ++i) {
        int w = c.index_of("w" + std::to_string(i + 1));
        CHECK(c.adj[w] == std::vector<int>{c.index_of("u" + std::to_string(i + 1))});
    }
    auto s2 = symmetric_group(2);
    CHECK(s2.size() == 2);
    CHECK(s2.dist(0, 1) == 2);
    auto s4 = symmetric_group(4);
    for (std::size_t i = 0; i < s4.size(); ++i)
        for (std::size_t j = i + 1; j < s4.size(); ++j) CHECK(s4.dist(i, j) >= 2);
    CHECK(satisfies_metric_axioms(s4));
    auto lv = boolean_levels(4, {2});
    CHECK(lv.size() == 6);
    CHECK(satisfies_metric_axioms(lv));
    CHECK(parse_space("tripod:4").size() == 17);
    CHECK(parse_space("levels:6:2,4").size() == 30);
    CHECK(parse_space("product:l0:complete:3*complete:4*complete:2").size() == 24);
    CHECK(error_code([] { symmetric_group(9); }) == "too-large");
    CHECK(error_code([] { parse_space("nosuch:3"); }) == "unknown-family");
    auto ts = tripod_star_graph(7);
    CHECK(ts.n == 29);
    CHECK(ts.has_edge(ts.index_of("w1"), ts.index_of("z2")));
}

TEST_CASE("hairs")
{
    auto hairs = find_hairs(tripod_graph(2));
    REQUIRE(hairs.size() == 3);
    std::vector<std::size_t> beyond;
    for (const auto& h : hairs) {
        CHECK(h.front() == 0);
        beyond.push_back(h.size() - 1);
    }
    std::sort(beyond.begin(), beyond.end());
    CHECK(beyond == std::vector<std::size_t>{2, 2, 4});
    CHECK(find_hairs(cycle_graph(5)).empty());
    auto p4 = find_hairs(path_graph(4));
    REQUIRE(p4.size() == 2);
    std::vector<int> mirrored(p4[1].rbegin(), p4[1].rend());
    CHECK(p4[0] == mirrored);
}

TEST_CASE("triangle inequality on constructed spaces")
{
    for (const char* spec : {"cycle:7", "caterpillar:3", "tripod:3", "hypercube:5", "symmetric_group:5",
                             "levels:6:1,3", "product:linf:path:4*cycle:5", "product:l0:complete:3*path:3"})
        CHECK_MESSAGE(satisfies_metric_axioms(parse_space(spec)), spec);
    CHECK(satisfies_metric_axioms(hypercube(14)));
}
