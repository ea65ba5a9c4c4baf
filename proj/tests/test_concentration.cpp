#include "doctest.h"

#include "lipcurv/concentration.hpp"
#include "lipcurv/families.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

using namespace lipcurv;

namespace {

// Variance of X over S_n by recursive construction of every permutation.
Rational permutation_variance_oracle(int n)
{
    std::vector<int> perm;
    std::vector<char> used(n, 0);
    long long s1 = 0, s2 = 0, count = 0;
    std::function<void()> rec = [&] {
        if (static_cast<int>(perm.size()) == n) {
            int x = 0;
            for (int i = 0; i < n; ++i) {
                bool high = 2 * (perm[i] + 1) > n;
                x += (2 * (i + 1) <= n) == high;  // i+1 <= n/2 counts "high", the rest "low"
            }
            s1 += x;
            s2 += x * x;
            ++count;
            return;
        }
        for (int v = 0; v < n; ++v)
            if (!used[v]) {
                used[v] = 1;
                perm.push_back(v);
                rec();
                perm.pop_back();
                used[v] = 0;
            }
    };
    rec();
    return Rational(count * s2 - s1 * s1) / Rational(count * count);
}

// Largest |A| with some B, |A| <= |B|, d(A, B) >= t, over all A, by brute force.
std::size_t levels_oracle(int k, int r, int t)
{
    std::vector<unsigned> pts;
    for (unsigned u = 0; u < (1u << k); ++u) {
        int w = std::popcount(u);
        if (2 * w == k - r || 2 * w == k + r) pts.push_back(u);
    }
    const std::size_t N = pts.size();
    std::size_t best = 0;
    for (unsigned A = 1; A < (1u << N); ++A) {
        std::size_t far = 0;
        for (std::size_t q = 0; q < N; ++q) {
            bool ok = true;
            for (std::size_t p = 0; p < N && ok; ++p)
                if (A >> p & 1) ok = std::popcount(pts[p] ^ pts[q]) >= t;
            far += ok;
        }
        std::size_t size = std::popcount(A);
        if (size <= far) best = std::max(best, size);
    }
    return best;
}

}  // namespace

TEST_CASE("tail bounds")
{
    CHECK(tail_bound(1, 0) == 1);
    CHECK(tail_bound(1, 2) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
    CHECK(tail_bound(1, 1, TailVariant::skewed) == 1);
    CHECK(tail_bound(4, 6, TailVariant::skewed) == doctest::Approx(std::exp(-2.0)));
    CHECK_THROWS_AS(tail_bound(0, 1), Error);
    CHECK_THROWS_AS(tail_bound(1, -1), Error);
    CHECK_THROWS_AS(tail_bound(4, 1, TailVariant::skewed), Error);
    CHECK(parse_tail_variant("skewed") == TailVariant::skewed);
    CHECK_THROWS_AS(parse_tail_variant("level"), Error);
    double prev = 2;
    for (double h = 0; h < 10; h += 0.1) {
        double b = tail_bound(0.7, h);
        CHECK(b <= 1);
        CHECK(b < prev);
        prev = b;
    }
}

TEST_CASE("empirical tails")
{
    auto k2 = MetricSpace::from_graph(complete_graph(2));
    auto f = make_field(k2, std::vector<int>{0, 1});
    CHECK(empirical_tail(f, Rational(1, 2)) == Rational(1, 2));
    CHECK(to_double(empirical_tail(f, Rational(1, 2))) <= tail_bound(0.25, 0.5));

    auto c1 = make_field(k2, std::vector<int>{3, 3});
    CHECK(empirical_tail(c1, Rational(1, 10)) == 0);

    // Distance field from a vertex of C_5: values 0,1,2,2,1 with mean 6/5.
    auto c5 = MetricSpace::from_graph(cycle_graph(5));
    auto d = make_field(c5, std::vector<int>{0, 1, 2, 2, 1});
    CHECK(empirical_tail(d, Rational(1, 2)) == Rational(2, 5));
    CHECK(empirical_tail(d, Rational(4, 5)) == Rational(2, 5));
    CHECK(empirical_tail(d, Rational(1)) == 0);
    CHECK(empirical_median_tail(d, Rational(1)) == Rational(2, 5));
    auto est = subgaussian_constant(c5);
    auto chk = tail_check(d, est.sigma2_grid_sup);
    CHECK(chk.violations == 0);
    CHECK(chk.chain_holds);

    // The derivation chain on every extremal field of a few small graphs.
    for (const auto& g : {cycle_graph(6), path_graph(5), star_graph(4), tripod_graph(2)}) {
        auto s = MetricSpace::from_graph(g);
        double sigma2 = subgaussian_constant(s).sigma2_grid_sup;
        for (const auto& field : enumerate_extremal_fields(s)) {
            auto c = tail_check(field, sigma2);
            CHECK(c.violations == 0);
            CHECK(c.chain_holds);
        }
    }
}

TEST_CASE("permutation variance")
{
    // n = 3 by hand: X is 0 when pi(1) = 1 and 2 otherwise, so var = 4 (1/3)(2/3).
    auto p3 = permutation_variance(3);
    CHECK(p3.exact == Rational(8, 9));
    CHECK(p3.formula == Rational(7, 9));
    CHECK_FALSE(p3.matches);
    auto p5 = permutation_variance(5);
    CHECK(p5.exact == Rational(36, 25));
    CHECK(p5.formula == Rational(33, 25));
    for (int n = 1; n <= 7; ++n) {
        auto p = permutation_variance(n);
        CHECK(p.exact == permutation_variance_oracle(n));
        CHECK(p.matches_corrected);
        CHECK(p.matches == (n % 2 == 0 || n == 1));
        if (n >= 3) CHECK(p.exact > Rational(n, 4));
    }
    CHECK(permutation_variance(4).exact == Rational(4, 3));
    CHECK_THROWS_AS(permutation_variance(9), Error);
}

TEST_CASE("level set bounds")
{
    auto a = level_set_sigma(4, 0);
    CHECK(a.bound == 3);
    CHECK(a.exhaustive);
    CHECK(a.below);
    auto b = level_set_sigma(3, 1);
    CHECK(b.bound == 2.25);
    CHECK(b.below);
    CHECK_THROWS_AS(level_set_sigma(4, 1), Error);
    CHECK(levels_factor(8, 0, 4) == doctest::Approx(std::exp(-16.0 / 56)));

    auto search = levels_adversarial_search(6);
    CHECK(search.violations == 0);
    for (const auto& row : search.rows)
        if (row.exhaustive) CHECK(row.best_a == levels_oracle(row.k, row.r, row.t));
    auto k4 = std::find_if(search.rows.begin(), search.rows.end(),
                           [](const auto& r) { return r.k == 4 && r.r == 0 && r.t == 3; });
    REQUIRE(k4 != search.rows.end());
    CHECK(k4->best_a == 1);

    auto far = linear_far_check(10, 10, 3, {4, 5, 6}, 20, 5);
    CHECK(far.domain_ok);
    CHECK(far.violations == 0);
    CHECK(far.checks == 20 * 21);
    auto bad = linear_far_check(10, 2, 3, {5}, 1, 5);
    CHECK_FALSE(bad.domain_ok);
    CHECK(bad.violated == "(c-1)/(2(c+1)) n > R");
}

TEST_CASE("symmetric group bounds")
{
    CHECK(sigma2_complete(3) == doctest::Approx(1 / (6 * std::log(2.0))));
    CHECK(sigma2_complete(4) == 0.25);
    // J_3 = K_3 x K_2: the grid estimates of the factors add up.
    double k3 = subgaussian_constant(MetricSpace::from_graph(complete_graph(3))).sigma2_grid_sup;
    CHECK(sigma2_jn(3) == doctest::Approx(k3 + 0.25).epsilon(1e-4));
    double jn = 0;
    for (int m = 2; m <= 6; ++m) jn += sigma2_complete(m);
    CHECK(sigma2_jn(6) == doctest::Approx(jn));

    auto s2 = sn_bounds_report(2);
    CHECK(s2.sigma2 == doctest::Approx(1).epsilon(1e-9));
    auto s3 = sn_bounds_report(3);
    CHECK(s3.sigma2 > 0.75);
    CHECK(s3.sigma2 <= 2);
    CHECK(s3.above_quarter_n);
    CHECK(s3.below_n_minus_1);
    CHECK(s3.above_j_n);
    auto s4 = sn_bounds_report(4);
    CHECK(s4.above_quarter_n);
    CHECK(s4.below_n_minus_1);
}

TEST_CASE("expander midpoints")
{
    auto pet = petersen_graph();
    auto spec = normalized_spectrum(pet);
    // Adjacency spectrum 3, 1 (x5), -2 (x4), divided by the degree.
    std::vector<double> expect(10, -2.0 / 3);
    std::fill(expect.begin() + 4, expect.end(), 1.0 / 3);
    expect.back() = 1;
    for (int i = 0; i < 10; ++i) CHECK(std::abs(spec[i] - expect[i]) < 1e-12);

    auto r = expander_midpoints(pet, {0}, {7});
    CHECK(std::abs(r.lambda2 - 1.0 / 3) < 1e-9);
    CHECK(std::abs(r.lambda_abs - 2.0 / 3) < 1e-9);
    CHECK(r.degree == 3);
    CHECK(r.d_star == 2);
    CHECK(r.mixing_holds);
    CHECK(r.midpoints >= 1);

    auto same = expander_midpoints(pet, {1, 2}, {2, 5});
    CHECK(same.degenerate);

    auto k5 = expander_midpoints(complete_graph(5), {0}, {1});
    CHECK(k5.lambda2 == doctest::Approx(-0.25));
    CHECK(k5.lambda_abs == doctest::Approx(0.25));

    CHECK_THROWS_AS(expander_midpoints(path_graph(4), {0}, {3}), Error);

    auto mix = mixing_lemma_check(pet, 1000, 3);
    CHECK(mix.pairs == 1000);
    CHECK(mix.violations == 0);
    CHECK(mixing_lemma_check(complete_graph(6), 300, 4).violations == 0);
    CHECK(mixing_lemma_check(hypercube_graph(4), 300, 4).violations == 0);
}
