#include "doctest.h"

#include "lipcurv/families.hpp"
#include "lipcurv/isoperimetry.hpp"

#include <algorithm>

using namespace lipcurv;

namespace {

MetricSpace space(const Graph& g) { return MetricSpace::from_graph(g); }

// Independent ball: scan all pairs.
std::size_t brute_ball(const MetricSpace& s, const std::vector<std::size_t>& S, int d)
{
    std::size_t c = 0;
    for (std::size_t u = 0; u < s.size(); ++u) {
        bool in = false;
        for (auto v : S) in |= s.dist(u, v) <= d;
        c += in;
    }
    return c;
}

}  // namespace

TEST_CASE("balls")
{
    auto star = space(star_graph(3));
    auto centre = VertexSet::of(star, {0});
    CHECK(ball(centre, 0) == centre);
    CHECK(ball(centre, 1).count() == 4);
    for (const char* spec : {"caterpillar:3", "cycle:9", "tripod:3", "levels:5:1,2", "product:l0:complete:3*path:3"}) {
        auto s = parse_space(spec);
        Rng rng(11);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<std::size_t> pts;
            for (std::size_t i = 0; i < 1 + rng.below(4); ++i) pts.push_back(rng.below(s.size()));
            auto S = VertexSet::of(s, pts);
            for (int a = 0; a <= 3; ++a) {
                CHECK(ball(S, a).count() == brute_ball(s, pts, a));
                CHECK(ball(S, a + 1).includes(ball(S, a)));
                for (int b = 0; b <= 2; ++b) CHECK(ball(ball(S, a), b) == ball(S, a + b));
            }
        }
    }
    CHECK_THROWS_AS(ball(VertexSet::empty(star), 1), Error);
}

TEST_CASE("level sets")
{
    auto k2 = space(complete_graph(2));
    CHECK(level_set(k2, std::vector<int>{0, 1}, 0).points() == std::vector<std::size_t>{0});
    auto sq = product({k2, k2}, ProductMetric::l1);
    CHECK(level_set(sq, std::vector<int>{0, 1}, 1).count() == 3);

    // Lipschitz fields: B_d(S_r) is inside S_{r+d}.
    auto cat = space(caterpillar_graph(3));
    auto fields = enumerate_extremal_fields(cat, 0, {16});
    for (std::size_t i = 0; i < fields.size(); i += 97) {
        std::vector<int> f(fields[i].values.data(), fields[i].values.data() + cat.size());
        for (int r = -6; r <= 6; ++r) {
            auto S = level_set(cat, f, r);
            if (S.count() == 0) continue;
            for (int d = 0; d <= 3; ++d) CHECK(level_set(cat, f, r + d).includes(ball(S, d)));
        }
    }
}

TEST_CASE("isoperimetric function")
{
    auto c4 = space(cycle_graph(4));
    CHECK(iso_function(c4, 1).value == 4);
    auto p4 = space(path_graph(4));
    auto r = iso_function(p4, 1);
    CHECK(r.value == 3);
    CHECK(r.witness.points() == std::vector<std::size_t>{0, 1});
    for (const char* spec : {"petersen", "caterpillar:2", "tripod:2", "cycle:7"}) {
        auto s = parse_space(spec);
        for (int d = 0; d <= s.diameter(); ++d) {
            auto iso = iso_function(s, d);
            CHECK(iso.witness.count() * 2 >= s.size());
            CHECK(ball(iso.witness, d).count() == iso.value);
            Rng rng(5 + d);
            for (int t = 0; t < 1000; ++t) {
                std::vector<std::size_t> pts;
                for (std::size_t i = 0; i < s.size(); ++i)
                    if (rng.below(2)) pts.push_back(i);
                if (pts.size() * 2 < s.size()) continue;
                CHECK(iso.value <= brute_ball(s, pts, d));
            }
        }
        CHECK(iso_function(s, s.diameter()).value == s.size());
    }
}

TEST_CASE("caterpillar counterexample, one copy")
{
    const int k = 4;
    auto rep = caterpillar_counterexample(k, 1);
    CHECK(rep.x_lipschitz);
    CHECK(rep.x_variance_optimal);
    CHECK(rep.single_copy_sizes);
    CHECK(rep.sizes_dominate);
    // Levels of X: 0 is {w1}, k is {u_k}, 2k+1 is {w_2k}.
    CHECK(rep.X[2 * k] == 0);
    CHECK(rep.X[k - 1] == k);
    CHECK(rep.X[4 * k - 1] == 2 * k + 1);
    for (const auto& row : rep.rows) {
        if (row.r >= k + 1 && row.d == 1 && row.set_x < 4 * k) {
            CHECK(row.ball_x == std::min<std::size_t>(row.set_x + 2, 4 * k));
            CHECK(row.ball_y == std::min<std::size_t>(row.set_y + 1, 4 * k));
        }
        if (row.r >= k + 1 && row.d >= 1) CHECK(row.contained);
    }
    // Where S_{r,X} = S_{r,Y} the two balls coincide as sets, and psi is not
    // the identity on them once they cross level k.
    CHECK_FALSE(rep.containment_all);
    for (const auto& [r, d] : rep.containment_failures) CHECK(r <= k);
    std::vector<std::pair<Rational, int>> strict{{5, 1}, {5, 2}, {5, 3}, {5, 4}, {6, 1}, {6, 2}, {6, 3}, {7, 1}, {7, 2}};
    CHECK(rep.strict_rows == strict);
}

TEST_CASE("caterpillar counterexample, two copies")
{
    auto rep = caterpillar_counterexample(3, 2);
    CHECK(rep.rows.size() > 0);
    CHECK(rep.median == Rational(7));
    auto rep4 = caterpillar_counterexample(4, 2);
    CHECK_FALSE(rep4.sizes_dominate);
    CHECK_FALSE(rep4.containment_all);
}

TEST_CASE("tripod")
{
    auto rep = tripod_examples(6, false);
    CHECK(rep.large_k);
    CHECK(rep.median == 0);
    CHECK(rep.mean > 0);
    CHECK(rep.mean == Rational(36, 25));
    CHECK(rep.image_of_set);
    CHECK(rep.containment_all);
    CHECK(rep.predicted_sizes_hold);
    CHECK(rep.x_optimal);
    CHECK(rep.witnesses_match);
    for (const auto& row : rep.rows) {
        if (row.d >= 1 && row.d <= 6) {
            CHECK(row.ball_x == 13 + static_cast<std::size_t>(row.d));
            CHECK(row.ball_neg == 13 + 2 * static_cast<std::size_t>(row.d));
            CHECK(row.strict);
        }
        if (row.d == 2) {
            CHECK(row.image == 15);
            CHECK(row.ball_neg == 17);
        }
    }
}

TEST_CASE("tripod with star")
{
    auto rep = tripod_examples(7, true);
    CHECK(rep.large_k);
    CHECK(rep.set_x == 6);
    CHECK(rep.set_neg == 6);
    CHECK(rep.image_of_set);
    CHECK(rep.containment_all);
    CHECK(rep.x_lipschitz);
    CHECK(rep.x_optimal);
    CHECK(rep.witnesses_match);
    CHECK(rep.median == 0);
    CHECK(rep.mean > 0);
    std::vector<int> strict{2, 3, 4, 5, 7, 8, 9, 10, 11};
    CHECK(rep.strict_d == strict);
    CHECK_THROWS_AS(tripod_examples(6, true), Error);
}
