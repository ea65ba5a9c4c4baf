#pragma once

#include "lipcurv/graph.hpp"
#include "lipcurv/transport.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lipcurv {

// |C_R| = |m~(empty, [R])| in H_R, by enumeration for R <= 20 and by the
// closed form C(R, R/2) or C(R, (R-1)/2) ((R+1)/2) above.
double c_r_size(int R);
double log_c_r(int R);
// R in [1, max_r] with ln|C_R| < 0.6 R - 1.
std::vector<int> c_r_bound_failures(int max_r = 60);

struct NegativeCurvatureReport {
    int k = 5, d = 10;
    Rational w2;
    double diag_mu_empty = 0;     // mu_C(empty) under the diagonal plan
    double diag_entropy = 0;      // S(mu_C), diagonal plan
    double diag_slack = 0;        // K = 0, t = 1/2
    double marginal_entropy = 0;  // S(mu_A) = S(mu_B)
    double maxent_deviation = 0;  // max |tau - 1/k^2|
    double maxent_entropy = 0;    // S(mu_C), max-entropy plan
    double maxent_slack = 0;
    double weak_bound = 0;        // (1/3)(S_A + S_B + 2 ln|C_2|)
    std::size_t forest_support = 0;
    Rational forest_cost;
};
// A = {{1}..{k}}, B = {{k+1}..{2k}} uniform in H_{2k}.
NegativeCurvatureReport negative_curvature_example(int k = 5);

struct WeakCurvatureComponent {
    int R = 0;
    double eta = 0, c_r = 0;
    double S_A = 0, S_B = 0, S_C = 0;
    double bound = 0;  // (1/3)(S_A + S_B + 2 ln|C_R|)
    bool holds = false;
    // Entropy identities of the lifted distribution zeta on A x B x C_R x M x M'.
    bool phi_injective = true;
    bool zeta_matches = true;   // zeta_M equals mu_C
    double identity_error = 0;  // largest residual of the three equalities
    double cond_a = 0, cond_b = 0;  // S(zeta_AM | zeta_A), S(zeta_BM | zeta_B)
    bool cond_bounds = true;        // both >= ln|C_R|
};

struct WeakCurvatureReport {
    int d = 0;
    double S_A = 0, S_B = 0, S_C = 0, W2 = 0;
    std::vector<WeakCurvatureComponent> components;
    bool constant_distance = true;  // one R over the whole support
    double weak_bound = 0;          // global bound when the distance is constant
    bool weak_holds = true;         // globally and in every component
    double almost_slack = 0;        // S_C - S_A/3 - S_B/3 - 2 W2^2 / (5 d^3) + 2/3
    bool almost_holds = false;
    double partition_error = 0;     // |S(mu_C) - sum eta_i (S(mu_C,i) - ln eta_i)|
    bool identities_hold = true;
};
// Hypercube only ("non-hypercube" otherwise); uses the max-entropy optimal plan.
WeakCurvatureReport weak_curvature_bounds(const Distribution& a, const Distribution& b);

// Random pair in H_d whose max-entropy optimal plan has a constant distance.
std::pair<Distribution, Distribution> random_constant_distance_instance(const MetricSpace& cube, Rng& rng,
                                                                        std::size_t max_support = 4);

struct WeakCurvatureSweep {
    std::size_t instances = 0, weak_violations = 0, almost_violations = 0, identity_failures = 0;
    double min_weak_slack = 0, min_almost_slack = 0;
};
WeakCurvatureSweep weak_curvature_sweep(std::size_t instances = 500, int max_d = 8, std::uint64_t seed = 1);

enum class Flavor { strong, sort_of_strong, sort_of_weak, weak };
Flavor parse_flavor(const std::string& name);
std::string flavor_name(Flavor f);

struct ConvexityCheck {
    Flavor flavor = Flavor::sort_of_weak;
    double slack = 0;  // minimum over plans (strong flavors) or the chosen plan
    bool holds = false;
    std::size_t plans = 0;
    bool complete = true;  // false when vertex enumeration hit its cap
    std::optional<TransportPlan> witness;  // the plan attaining the reported slack
};
// Strong flavors take the minimum over the vertices of the optimal face
// (entropy of mu_t is concave in the plan).  Weak flavors take the larger of
// the max-entropy plan and the best vertex.  Geodesic measures are uniform.
ConvexityCheck convexity_check(const Distribution& a, const Distribution& b, const Rational& t, double K, Flavor flavor);

struct StrongWitness {
    int v = -1;
    std::vector<int> source, target;  // uniform supports
    std::vector<std::pair<int, int>> plan;  // uniform mass on these pairs
    bool verified = false;  // plan optimal, every pair has v as a midpoint, slack < 0
    double slack = 0;       // with all midpoint mass routed through v, t = 1/2, K = 0
};

struct StrongConvexityReport {
    std::string family;  // "path", "cycle", "complete", "complete-minus-edge", or empty
    bool recognized = false;
    bool obstruction_free = true;
    bool agree = false;
    std::optional<StrongWitness> witness;
};
StrongConvexityReport strong_convexity_characterization(const Graph& g);

struct StrongConvexitySweep {
    int max_n = 0;
    std::size_t graphs = 0, recognized = 0, disagreements = 0, unverified_witnesses = 0;
    std::vector<std::vector<std::pair<int, int>>> disagreeing;  // first few edge lists
};
// All connected labelled graphs on 1..max_n vertices.
StrongConvexitySweep strong_convexity_exhaustive(int max_n = 7);

}  // namespace lipcurv
