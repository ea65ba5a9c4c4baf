#pragma once

#include "lipcurv/core.hpp"
#include "lipcurv/hypercube.hpp"
#include "lipcurv/metric.hpp"

#include <optional>
#include <vector>

namespace lipcurv {

// Probability measure on points of a space, exact masses, sorted support.
struct Distribution {
    const MetricSpace* space = nullptr;
    std::vector<std::size_t> points;
    std::vector<Rational> mass;

    // Merges repeated points, drops zero masses; the total must be 1 within
    // 1e-12 and is then normalized exactly.
    static Distribution make(const MetricSpace& s, std::vector<std::pair<std::size_t, Rational>> entries);
    static Distribution uniform(const MetricSpace& s, const std::vector<std::size_t>& points);
    static Distribution point(const MetricSpace& s, std::size_t p);
    std::size_t size() const { return points.size(); }
};

// Measure on midpoint atoms (points and edges).
struct AtomDistribution {
    std::vector<MidpointAtom> atoms;
    std::vector<double> mass;
    double at(const MidpointAtom& a) const;
};

// tau over support(source) x support(target), row-major.  Exact plans keep
// rational entries as well.
struct TransportPlan {
    Distribution source, target;
    std::vector<double> mass;
    std::vector<Rational> exact;
    double w1 = 0, w2 = 0;

    std::size_t rows() const { return source.size(); }
    std::size_t cols() const { return target.size(); }
    double at(std::size_t i, std::size_t j) const { return mass[i * cols() + j]; }
    bool is_exact() const { return !exact.empty(); }
    int dist(std::size_t i, std::size_t j) const { return source.space->dist(source.points[i], target.points[j]); }
    // Cells with positive mass (exact test for exact plans, > tol otherwise).
    std::vector<std::pair<std::size_t, std::size_t>> support(double tol = 1e-12) const;
};

TransportPlan make_plan(const Distribution& a, const Distribution& b, std::vector<Rational> exact);
TransportPlan make_plan(const Distribution& a, const Distribution& b, std::vector<double> mass);
// Checks marginals (exact for exact plans, 1e-9 otherwise) and nonnegativity.
bool is_transportation(const TransportPlan& p);

struct WassersteinResult {
    double value = 0;
    std::optional<Rational> exact;  // when solved in rational arithmetic
    TransportPlan plan;             // basic optimal solution
    std::vector<double> u, v;       // one optimal dual
    std::vector<char> zero_reduced; // cells with zero reduced cost under (u, v)
};
// Exact rational simplex when both supports have at most exact_limit atoms.
WassersteinResult wasserstein(const Distribution& a, const Distribution& b, int order = 2, std::size_t exact_limit = 64);

struct MonotonicityReport {
    bool monotone = true;
    std::vector<std::pair<std::size_t, std::size_t>> cycle;  // violating sequence (a_i, b_i) as points
    long long excess = 0;  // sum d(a_i,b_i)^2 minus the shifted sum, > 0 on violation
};
// Cycles of at most `cap` support pairs; cap = 0 means unbounded.
MonotonicityReport is_cyclically_monotone(const TransportPlan& p, std::size_t cap = 6);

struct MaxEntropyOptions {
    double tolerance = 1e-10;
    std::size_t max_iterations = 200000;
};
TransportPlan max_entropy_optimal_plan(const Distribution& a, const Distribution& b, const MaxEntropyOptions& opt = {});

struct PartitionComponent {
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    double eta = 0;
    std::optional<Rational> eta_exact;
    TransportPlan plan;  // normalized tau_i between the component marginals
    std::vector<int> distances;  // distinct pair distances in the component
};
struct PartitionResult {
    std::vector<int> component;  // per cell of the support (row-major order), -1 off the support
    std::vector<PartitionComponent> parts;
    bool constant_distances = true;
};
PartitionResult partition(const TransportPlan& p);

struct LargenessReport {
    int D = 0;
    bool constant_distance = false, all_pairs_far = false, costs_match = false;
    double w1 = 0, w2 = 0;
};
// Requires a single partition component ("has-partition" otherwise).
LargenessReport everybody_is_large_check(const TransportPlan& p);

// Geodesic counts N(a, u) for every u.
std::vector<double> geodesic_counts(const MetricSpace& s, std::size_t a);

// Distance interpolation with uniform geodesic measure; t = 1/2 emits edge
// atoms for odd distances.
AtomDistribution interpolate(const TransportPlan& p, const Rational& t);

double entropy(const Distribution& d);
double entropy(const AtomDistribution& d);
double entropy(const std::vector<double>& masses);
double entropy(const TransportPlan& p);

// H(mu_t) - (1 - t) H(mu_A) - t H(mu_B) - (K/2) t (1 - t) W2, with mu_0 = mu_A and
// W2 the optimal cost between the plan's marginals unless given.
double displacement_convexity_slack(const TransportPlan& p, const Rational& t, double K,
                                    std::optional<double> w2 = std::nullopt);

struct ProductStructureReport {
    std::size_t shared_atoms = 0;
    double max_deviation = 0;  // |tau(a,b) tau(a',b') - tau(a,b') tau(a',b)|
    bool distances_equal = true, atoms_shared = true, entries_positive = true;
};
ProductStructureReport product_structure_check(const TransportPlan& p, double tol = 1e-9);

struct VertexEnumeration {
    std::vector<TransportPlan> plans;
    bool complete = false;
};
// Walks the vertices of the optimal face; `step_cap` bounds the cycle search.
VertexEnumeration optimal_vertices(const Distribution& a, const Distribution& b, std::size_t cap = 1000,
                                   std::size_t step_cap = 20000000);

// Removes support cycles of an exact plan without raising its cost.
TransportPlan cancel_cycles(const TransportPlan& p);
bool support_is_forest(const TransportPlan& p);
// For all A', B' inside the supports (exhaustive when |A| + |B| <= 16).
bool forest_subset_bound(const TransportPlan& p);
TransportPlan acyclic_optimal_transport(const Distribution& a, const Distribution& b);

}  // namespace lipcurv
