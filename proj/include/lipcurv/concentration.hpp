#pragma once

#include "lipcurv/core.hpp"
#include "lipcurv/graph.hpp"
#include "lipcurv/isoperimetry.hpp"
#include "lipcurv/lipschitz.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lipcurv {

enum class TailVariant { plain, skewed };
TailVariant parse_tail_variant(const std::string& name);

// plain: exp(-h^2 / (2 sigma2)) for h >= 0.
// skewed: exp(-(h/sigma - 1)^2 / 2) for h >= sigma, bounding P(X - m(X) >= h).
double tail_bound(double sigma2, double h, TailVariant variant = TailVariant::plain);

// Exact P(f - E f >= h) under the uniform measure.
Rational empirical_tail(const IntField& f, const Rational& h);
// Exact P(f - m(f) >= h) with m the lower median.
Rational empirical_median_tail(const IntField& f, const Rational& h);

struct TailCheck {
    double sigma2 = 0;
    std::size_t points = 0;        // h values checked
    std::size_t violations = 0;    // plain and skewed together
    double worst_margin = 0;       // min of bound - tail over the grid
    // |E - m| <= E|X - m| <= E|X - E| <= sqrt(var)
    double mean_minus_median = 0, abs_dev_median = 0, abs_dev_mean = 0, std_dev = 0;
    bool chain_holds = true;
};
// Both tails at every h in [0, max(f) - min(f)] in steps of `step`.
TailCheck tail_check(const IntField& f, double sigma2, double step = 0.25);

struct PermutationVariance {
    int n = 0;
    Rational exact;    // over all n! permutations
    Rational formula;  // n/4 + ((n-1)^2 - 2)/(8n^2) for odd n, n^2 / (4(n-1)) for even n
    // (n-1)(n+1)^2 / (4n^2) for odd n: the covariance sum over ordered pairs.
    // The stated odd formula counts each pair once.
    Rational corrected;
    bool matches = false, matches_corrected = false;
    std::vector<int> field;  // X on symmetric_group(n), in its point order
};
PermutationVariance permutation_variance(int n);

struct LevelSetSigma {
    int n = 0, r = 0;
    double bound = 0;  // n - 1 + r^2/4
    double sigma2 = 0;  // grid estimate on C_{(n-r)/2,(n+r)/2}
    bool exhaustive = false;  // false: a lower estimate
    bool below = false;
};
LevelSetSigma level_set_sigma(int n, int r);

struct LinearFarReport {
    int n = 0;
    double c = 0;
    int R = 0;
    std::vector<int> levels;
    bool domain_ok = false;
    std::string violated;  // the first violated hypothesis
    double exponent_constant = 0;  // (R+3) ln c - ln k
    std::size_t fields = 0, checks = 0, violations = 0;
    double worst_margin = 0;  // min of bound - tail
};
// Checks the bound for X_* = d(., A) over `trials` random sets A on the full
// cube (n <= 16), with E X_* computed exactly.
LinearFarReport linear_far_check(int n, double c, int R, const std::vector<int>& levels, int trials,
                                 std::uint64_t seed);
double linear_far_bound(int n, double c, int R, int k, double h);

struct LevelsSearchRow {
    int k = 0, r = 0, t = 0;
    std::size_t space = 0;
    double bound = 0;        // |C_{(k-r)/2,(k+r)/2}| exp(-t^2 / (8k - 8 + 2r^2))
    std::size_t best_a = 0;  // largest |A| found with |A| <= |B|, d(A, B) >= t
    bool exhaustive = false;
    bool violated = false;
};
struct LevelsSearchReport {
    std::vector<LevelsSearchRow> rows;
    std::size_t violations = 0;
};
double levels_factor(int k, int r, double t);
// Every k <= max_k, r in {0, 1, 2} of the parity of k, t in 1..k.  Exhaustive
// over A when the space has at most `exhaustive_limit` (<= 20) points, otherwise over
// balls, coordinate half-spaces, and a greedy growth from each.
LevelsSearchReport levels_adversarial_search(int max_k = 10, std::size_t exhaustive_limit = 20);

struct SnReport {
    int n = 0;
    double sigma2 = 0;  // grid estimate on S_n, seeded with the permutation field
    bool exhaustive = false;
    Rational variance_lower;  // var of the permutation field
    double j_n = 0;           // closed form for K_n x ... x K_2
    bool above_quarter_n = false;  // sigma2 > n/4 (n >= 3)
    bool below_n_minus_1 = false;  // sigma2 <= n - 1
    bool above_j_n = false;        // n/4 > j_n + 1/4
};
double sigma2_complete(int m);  // 1/4 for even m, 1/(2m ln((r+1)/r)) for m = 2r+1
double sigma2_jn(int n);
SnReport sn_bounds_report(int n);

struct MixingCheck {
    std::size_t pairs = 0, violations = 0;
    double worst_ratio = 0;  // max |e - d|X||Y|/n| / (lambda d sqrt(|X||Y|))
};

struct ExpanderReport {
    int n = 0, degree = 0;
    double lambda2 = 0;     // second-largest eigenvalue of D^-1/2 A D^-1/2
    double lambda_abs = 0;  // largest |eigenvalue| other than the top one
    int d_star = 0;
    bool degenerate = false;  // d_star == 0
    std::size_t s_prime = 0, t_prime = 0, edges = 0;  // |S'|, |T'|, e(S', T')
    std::size_t midpoints = 0;                        // |m^(S, T)|
    double edge_bound = 0;                            // e(S', T') / degree
    bool mixing_holds = false;      // for (S', T') with lambda_abs
    bool mixing_holds_lambda2 = false;
};
// Eigenvalues of the normalized adjacency matrix, ascending.
std::vector<double> normalized_spectrum(const Graph& g);
std::size_t edge_count(const Graph& g, const std::vector<char>& X, const std::vector<char>& Y);
ExpanderReport expander_midpoints(const Graph& g, const std::vector<int>& S, const std::vector<int>& T);
// Random pairs of nonempty sets; `use_lambda2` tests the weaker constant.
MixingCheck mixing_lemma_check(const Graph& g, std::size_t pairs, std::uint64_t seed, bool use_lambda2 = false);

}  // namespace lipcurv
