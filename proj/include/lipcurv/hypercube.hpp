#pragma once

#include "lipcurv/core.hpp"
#include "lipcurv/isoperimetry.hpp"
#include "lipcurv/metric.hpp"

#include <compare>
#include <optional>
#include <vector>

namespace lipcurv {

// A point (u == v) or an edge {u, v} with u < v.
struct MidpointAtom {
    std::size_t u = 0, v = 0;
    bool is_edge() const { return u != v; }
    static MidpointAtom point(std::size_t p) { return {p, p}; }
    static MidpointAtom edge(std::size_t a, std::size_t b) { return a < b ? MidpointAtom{a, b} : MidpointAtom{b, a}; }
    auto operator<=>(const MidpointAtom&) const = default;
};

std::string atom_label(const MetricSpace& s, const MidpointAtom& m);

// Points u with d(a,u) = k and d(a,u) + d(u,b) = d(a,b), sorted.
std::vector<std::size_t> geodesic_layer(const MetricSpace& s, std::size_t a, std::size_t b, int k);

// Both rounded layers floor(rho d) and ceil((1 - rho) d).
std::vector<std::size_t> midpoints_hat(const MetricSpace& s, std::size_t a, std::size_t b,
                                       const Rational& rho = Rational(1, 2));
VertexSet midpoints_hat(const VertexSet& S, const VertexSet& T, const Rational& rho = Rational(1, 2));
// Only the layer floor(rho d) measured from the first argument.
VertexSet midpoints_directed(const VertexSet& S, const VertexSet& T, const Rational& rho);

// Graph metrics only when d(a,b) is odd ("no-edge-atoms" otherwise).
std::vector<MidpointAtom> midpoints_tilde(const MetricSpace& s, std::size_t a, std::size_t b);
bool is_graph_metric(const MetricSpace& s);

bool is_convex(const VertexSet& S);
VertexSet convex_closure(const VertexSet& S);

// Cube only: [meet, join] of S as bitmasks, and whether S equals it.
std::pair<std::uint64_t, std::uint64_t> cube_hull(const VertexSet& S);
bool is_interval(const VertexSet& S);
VertexSet interval(const MetricSpace& cube, std::uint64_t lo, std::uint64_t hi);

struct IteratedMidpointReport {
    int d = 12;
    std::size_t size_a = 0, size_b = 0;
    bool a_convex = false, b_convex = false;
    std::uint64_t phi = 0, zeta = 0;
    bool phi_is_midpoint = false;       // phi in m^(A,B)
    bool zeta_is_iterated = false;      // zeta in m^(A, m^(A,B))
    bool zeta_in_quarter = false;       // zeta in the one-sided quarter layer m_{1/4}(A,B)
    bool zeta_in_hat_quarter = false;   // zeta in the two-sided m^_{1/4}(A,B)
    bool zeta_in_half = false;
    std::pair<int, int> half_levels, quarter_levels, hat_quarter_levels;
    std::size_t half_size = 0, quarter_size = 0, hat_quarter_size = 0, iterated_size = 0, outer_size = 0;
    bool outer_contains_hat_quarter = false;   // m^(m^(A,B),B) contains m^_{1/4}(A,B)
    bool inner_strictly_contains = false;      // m^(A,m^(A,B)) strictly contains m_{1/4}(A,B)
    bool outer_strictly_contains = false;      // m^(m^(A,B),B) strictly contains m_{3/4}(A,B)
};
IteratedMidpointReport iterated_midpoint_counterexample();

struct CurvatureEstimate {
    std::vector<std::size_t> S, T;
    int d_star = 0;
    std::size_t midpoints = 0;
    std::optional<double> k_hat;  // undefined when d_star = 0
};
CurvatureEstimate bm_curvature(const VertexSet& S, const VertexSet& T, const Rational& rho = Rational(1, 2));

struct ScanOptions {
    std::size_t samples = 10000;
    int min_dstar = 2;
    std::size_t max_set = 12;
    std::uint64_t seed = 1;
    std::size_t max_rejections = 1000000;
};
struct ScanReport {
    int dimension = 0;  // number of factors, d in 1/(2d)
    double threshold = 0;
    std::size_t samples = 0, rejected = 0;
    double min_k_hat = 0;
    std::optional<CurvatureEstimate> worst;
    std::vector<CurvatureEstimate> below;  // samples with K_hat < 1/(2d)
};
// Space must be a hypercube or an l0 product.  Half the samples are uniform
// small sets, half are clustered around two random centres.
ScanReport bm_scan(const MetricSpace& s, const ScanOptions& opt);
int l0_dimension(const MetricSpace& s);

struct PhiReport {
    int r = 0;
    std::size_t pairs = 0, classes = 0, images = 0;
    bool distances_ok = true;   // d(s, m2) = |pi|, d(s, m1) = r - |pi|, d(m1, m2) = r
    bool in_midpoints = true;   // m1, m2 in m^_rho(S, T)
    bool inverts = true;        // phi'(phi((s,t),pi), pi) = (s,t)
    bool injective_per_class = true;
    std::size_t max_preimages = 0;  // over images, summed over pi
};
PhiReport phi_injection_check(const VertexSet& S, const VertexSet& T, const Rational& rho, int r);

}  // namespace lipcurv
