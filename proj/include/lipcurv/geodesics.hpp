#pragma once

#include "lipcurv/core.hpp"
#include "lipcurv/graph.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lipcurv {

// 1: w(P) = prod over interior vertices of 1/deg.
// 2: w(P) = (deg(x) + deg(y)) prod over all vertices of 1/(deg + 1).
enum class WeightVariant { interior = 1, endpoint = 2 };
WeightVariant parse_weight_variant(const std::string& name);

struct MidpointLaw {
    WeightVariant variant = WeightVariant::interior;
    std::optional<Rational> c;  // paths of length L weighted by c^L
    std::vector<Rational> law;  // over vertices; all zero when there are no even geodesics
    bool no_even_geodesics = false;
    std::vector<int> attaining, unattained;
    bool proportional = false;  // law(z) / deg(z) constant over the attaining vertices
    double ratio_spread = 0;    // max / min of law(z) / deg(z) over attaining vertices, minus 1
    Rational excluded_mass;     // weight share of odd-length geodesics
    BigInt even_geodesics, odd_geodesics;  // ordered pairs, length >= 1
};
// Every geodesic between ordered pairs at positive distance, through shortest-
// path predecessor counts (no path is materialized).  n <= 200.
MidpointLaw exact_midpoint_law(const Graph& g, WeightVariant variant, std::optional<Rational> c = {});

// A walk segment counts when its endpoints are as far apart as its length.
bool is_geodesic_segment(const std::vector<std::vector<int>>& dist, const std::vector<int>& walk);

struct TeleportWalk {
    WeightVariant variant = WeightVariant::interior;
    double c = 0;
    std::uint64_t steps = 0, seed = 0;
    std::uint64_t segments = 0, trivial = 0, rejected = 0, odd = 0, accepted = 0;
    std::vector<std::uint64_t> midpoints;  // tallies over accepted even segments
    std::vector<double> target;            // exact law of the sampled process
    double chi_square_distance = 0;        // sum (p_hat - p)^2 / p
    std::size_t outside_3sigma = 0;        // vertices with |count - N p| > 3 sqrt(N p (1 - p))
    double min_p_value = 1;                // exact two-sided binomial, smallest over vertices
    bool matches = false;                  // min_p_value * vertices >= 0.0027 (3 sigma, family-wise)

    std::vector<std::uint64_t> occupancy;
    std::vector<double> stationary;        // exact stationary law of the token chain
    // Batch means over 100 batches, every tenth of the run.  p-values are
    // Student t, Bonferroni-adjusted over vertices and checkpoints.
    double occupancy_degree_z = 0, occupancy_degree_p = 1;          // against deg / 2|E|
    double occupancy_stationary_z = 0, occupancy_stationary_p = 1;  // against the stationary law
    bool occupancy_degree_proportional = false;  // adjusted p >= 0.0027
    bool occupancy_stationary = false;
};
// Two-sided 3 sigma level.
inline constexpr double three_sigma_level = 0.0027;
// Variant 1 moves by a random-walk step with probability c and teleports to a
// uniform endpoint of a uniform edge otherwise; variant 2 teleports with
// probability 1/(deg + 1) and ignores c.
TeleportWalk mc_teleport_walk(const Graph& g, double c, std::uint64_t steps, std::uint64_t seed,
                              WeightVariant variant = WeightVariant::interior);

struct ConvergenceCheck {
    std::vector<double> median_distance;  // per step count
    bool decreasing = false;
};
// Median chi-square distance over `seeds` chains at steps, 10 steps, 100 steps, ...
ConvergenceCheck mc_convergence(const Graph& g, double c, std::uint64_t base_steps, int decades, int seeds,
                                std::uint64_t seed, WeightVariant variant = WeightVariant::interior);

}  // namespace lipcurv
