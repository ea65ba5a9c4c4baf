#pragma once

#include "lipcurv/core.hpp"
#include "lipcurv/lipschitz.hpp"
#include "lipcurv/metric.hpp"

#include <optional>
#include <vector>

namespace lipcurv {

struct VertexSet {
    const MetricSpace* space = nullptr;
    std::vector<char> member;

    static VertexSet empty(const MetricSpace& s) { return {&s, std::vector<char>(s.size(), 0)}; }
    static VertexSet of(const MetricSpace& s, const std::vector<std::size_t>& points);
    std::size_t count() const;
    bool contains(std::size_t i) const { return member[i] != 0; }
    std::vector<std::size_t> points() const;
    bool operator==(const VertexSet& o) const { return member == o.member; }
    bool includes(const VertexSet& o) const;  // o is a subset of *this
};

// d(u, S) for every point; BFS on graph spaces, direct minimum otherwise.
std::vector<int> distance_to_set(const VertexSet& s);
VertexSet ball(const VertexSet& s, int d);

// {a : sum_i f(a_i) <= r} on a power of the base space (the space itself when
// it has no factors).
VertexSet level_set(const MetricSpace& power, const std::vector<Rational>& base_values, const Rational& r);
VertexSet level_set(const MetricSpace& power, const std::vector<int>& base_values, const Rational& r);

struct IsoResult {
    std::size_t value = 0;
    VertexSet witness;
};
// min |B_d(S)| over |S| >= n/2.  Only |S| = ceil(n/2) is scanned, since adding
// points never shrinks a ball.
IsoResult iso_function(const MetricSpace& g, int d);

// Permutation of points applied coordinatewise on a power of the base space.
std::vector<std::size_t> tensor_permutation(const MetricSpace& power, const std::vector<int>& psi);
VertexSet image(const VertexSet& s, const std::vector<std::size_t>& perm);

struct CaterpillarRow {
    Rational r;
    int d = 0;
    std::size_t set_x = 0, set_y = 0, ball_x = 0, ball_y = 0;
    bool contained = false;  // psi^n(B_d(S_{r,X})) contains B_d(S_{r,Y})
    bool strict = false;
    bool predicted_strict = false;  // d > 0 and r >= k + 2
};

struct CaterpillarReport {
    int k = 0, n = 0;
    std::vector<int> X, Y, psi;  // per base vertex
    Rational median;             // n (2k+1) / 2
    std::vector<CaterpillarRow> rows;
    bool containment_all = true;
    bool strict_matches_prediction = true;
    bool sizes_dominate = true;  // |B_d(S_{r,Y})| <= |B_d(S_{r,X})| everywhere
    bool single_copy_sizes = true;  // the n = 1 ball-growth formulas for r >= k+1 (clipped at |V|)
    std::vector<std::pair<Rational, int>> containment_failures;
    std::vector<std::pair<Rational, int>> strict_rows;
    bool x_lipschitz = false;
    bool x_variance_optimal = false;  // checked by enumeration when 4k <= 24
    std::optional<bool> x_optimality_checked;
};
CaterpillarReport caterpillar_counterexample(int k, int n);

struct TripodRow {
    int d = 0;
    std::size_t ball_x = 0, ball_neg = 0, image = 0;
    bool contained = false, strict = false;
    std::optional<std::size_t> predicted_x, predicted_neg;  // sizes stated for this d, when stated
};

struct TripodReport {
    int k = 0;
    bool star = false;
    std::vector<int> X, psi;
    Rational median, mean;
    Rational set_threshold_x, set_threshold_neg;  // S_{a,X} and S_{b,-X}
    std::size_t set_x = 0, set_neg = 0;
    bool image_of_set = false;  // psi(S_{a,X}) = S_{b,-X}
    std::vector<TripodRow> rows;
    bool containment_all = true;
    std::vector<int> strict_d;
    bool predicted_sizes_hold = true;
    Rational c2, variance_x;
    bool x_lipschitz = false;
    bool x_optimal = false;         // var(X) = c^2 over the tree (the star variant: over G')
    bool witnesses_match = false;   // every optimal field is X or -X up to hair symmetry
    bool large_k = false;           // k within the range where the optimality claim is made
};
TripodReport tripod_examples(int k, bool star);

}  // namespace lipcurv
