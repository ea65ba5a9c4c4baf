#pragma once

#include "lipcurv/core.hpp"
#include "lipcurv/metric.hpp"

#include <Eigen/Core>
#include <boost/multiprecision/eigen.hpp>

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace lipcurv {

template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Real-valued function on the points of a space.  The anchor carries value 0
// for fields produced by the enumerator; user fields are re-anchored on input.
template <class Scalar>
struct ScalarField {
    const MetricSpace* space = nullptr;
    Vec<Scalar> values;
    std::size_t anchor = 0;

    std::size_t size() const { return static_cast<std::size_t>(values.size()); }
    Scalar operator[](std::size_t i) const { return values[static_cast<Eigen::Index>(i)]; }
};

using IntField = ScalarField<int>;
using RealField = ScalarField<double>;
using ExactField = ScalarField<Rational>;

inline double as_double(int x) { return x; }
inline double as_double(double x) { return x; }
inline double as_double(const Rational& x) { return to_double(x); }

template <class Scalar>
ScalarField<Scalar> make_field(const MetricSpace& s, const std::vector<Scalar>& v, std::size_t anchor = 0)
{
    ScalarField<Scalar> f;
    f.space = &s;
    f.values = Vec<Scalar>(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) f.values[static_cast<Eigen::Index>(i)] = v[i];
    f.anchor = anchor;
    return f;
}

template <class To, class From>
ScalarField<To> field_cast(const ScalarField<From>& f)
{
    ScalarField<To> g;
    g.space = f.space;
    g.anchor = f.anchor;
    g.values = Vec<To>(f.values.size());
    for (Eigen::Index i = 0; i < f.values.size(); ++i) {
        if constexpr (std::is_same_v<To, double>) g.values[i] = as_double(f.values[i]);
        else g.values[i] = To(f.values[i]);
    }
    return g;
}

struct LipschitzCheck {
    bool ok = true;
    std::size_t u = 0, v = 0;  // pair with the largest |f(u)-f(v)| - L d(u,v)
    double excess = 0;
};

template <class Scalar>
LipschitzCheck is_lipschitz(const ScalarField<Scalar>& f, double L = 1.0)
{
    LipschitzCheck out;
    const MetricSpace& s = *f.space;
    double worst = -1e300;
    for (std::size_t u = 0; u < s.size(); ++u)
        for (std::size_t v = u + 1; v < s.size(); ++v) {
            double gap = std::abs(as_double(f[u]) - as_double(f[v])) - L * s.dist(u, v);
            if (gap > worst) {
                worst = gap;
                out.u = u;
                out.v = v;
            }
        }
    if constexpr (std::is_same_v<Scalar, double>) {
        out.ok = worst <= 1e-12;
    } else {
        out.ok = true;
        for (std::size_t u = 0; u < s.size() && out.ok; ++u)
            for (std::size_t v = u + 1; v < s.size(); ++v) {
                Scalar diff = f[u] > f[v] ? Scalar(f[u] - f[v]) : Scalar(f[v] - f[u]);
                if (Rational(diff) > Rational(L) * s.dist(u, v)) {
                    out.ok = false;
                    break;
                }
            }
    }
    out.excess = std::max(0.0, worst);
    return out;
}

Rational mean(const IntField& f);
Rational variance(const IntField& f);
Rational mean(const ExactField& f);
Rational variance(const ExactField& f);
double mean(const RealField& f);
double variance(const RealField& f);

// ln E exp(t (f - E f)) under the uniform measure, in shifted log domain.
double log_moment(const std::vector<double>& values, double t);
template <class Scalar>
double log_moment(const ScalarField<Scalar>& f, double t)
{
    std::vector<double> v(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) v[i] = as_double(f[i]);
    return log_moment(v, t);
}

struct EnumOptions {
    std::size_t max_points = 32;
    std::uint64_t max_nodes = 4000000000ULL;
    bool reduce_twins = false;  // keep one representative per ordering of interchangeable leaves
};

// Streams every integer anchored 1-Lipschitz field whose tight pairs span the
// space.  Returns the number of fields visited.
std::uint64_t for_each_extremal_field(const MetricSpace& s, std::size_t anchor, const EnumOptions& opt,
                                      const std::function<void(const std::vector<int>&)>& visit);
std::vector<IntField> enumerate_extremal_fields(const MetricSpace& s, std::size_t anchor = 0,
                                                EnumOptions opt = {16});

struct MaxVariance {
    Rational c2;
    std::vector<IntField> witnesses;
    std::uint64_t fields = 0;
    bool witnesses_truncated = false;
};
MaxVariance max_variance(const MetricSpace& s, EnumOptions opt = {}, std::size_t max_witnesses = 256);

// Fields grouped by their multiset of values up to translation; every
// functional used here (variance, log-moment) depends on that multiset only.
struct ValueProfile {
    std::vector<int> values;  // distinct values, shifted so the minimum is 0
    std::vector<int> counts;
    std::vector<int> representative;
    std::uint64_t members = 0;
    std::vector<std::vector<int>> all_members;  // filled only when the pool keeps them

    double log_moment(double t) const;
    Rational variance() const;
};

class FieldPool {
public:
    explicit FieldPool(bool keep_members = false) : keep_(keep_members) {}
    void add(const std::vector<int>& field);
    const std::vector<ValueProfile>& profiles() const { return profiles_; }
    std::uint64_t fields() const { return fields_; }

private:
    bool keep_;
    std::uint64_t fields_ = 0;
    std::vector<ValueProfile> profiles_;
    std::unordered_map<std::string, std::size_t> index_;
};

struct Grid {
    double tmin = 1e-3;
    double tmax = 50;
    int points = 400;
    std::vector<double> values() const;
};

struct LogMomentCurve {
    std::vector<double> t;
    std::vector<double> value;                     // L_G(t)
    std::vector<std::vector<std::size_t>> witness;  // profile indices within 1e-12 of the max
};
LogMomentCurve log_moment_envelope(const FieldPool& pool, const std::vector<double>& t);

struct PoolOptions {
    EnumOptions enumeration;
    std::size_t exhaustive_limit = 40;  // above this many points use the search heuristic
    std::vector<std::vector<int>> seeds;  // extra candidate fields for the heuristic
    std::uint64_t seed = 1;
    bool keep_members = false;
};
// Exhaustive pool when feasible, otherwise a local-search pool of Lipschitz
// fields (a lower estimate for every functional).
FieldPool candidate_pool(const MetricSpace& s, const PoolOptions& opt, bool* exhaustive = nullptr);

struct SubgaussianEstimate {
    double sigma2_lower = 0;     // sup over the grid and the t -> 0 limit (= c^2)
    double sigma2_grid_sup = 0;  // the reported estimate; equal to sigma2_lower here
    double t_star = 0;           // 0 when the limit t -> 0 attains the supremum
    IntField witness;
    Rational c2;
    Grid grid;
    bool exhaustive = true;
    std::uint64_t fields = 0;
    std::size_t profiles = 0;
    double smallest_t_ratio = 0;  // 2 L_G(t_min) / t_min^2
};
SubgaussianEstimate subgaussian_constant(const MetricSpace& s, Grid grid = {}, PoolOptions opt = {});

struct CheckOutcome {
    bool pass = true;
    std::optional<std::size_t> witness;  // offending point
    std::string detail;
};

struct StructureReport {
    CheckOutcome unimodal_hairs;   // (a)
    CheckOutcome origin;           // (b)
    CheckOutcome origin_below;     // (c)
    CheckOutcome descent;          // (d)
    CheckOutcome ascent_below;     // log-moment half: f(u) < E f has a neighbour at f(u)+1
    std::vector<std::size_t> origin_set;
    std::vector<int> component_signs;  // +1 / -1 per component of G - O, 0 if mixed
};
StructureReport structure_checks(const ExactField& f, const Graph& g);

struct OddCycleReport {
    bool holds = true;
    bool vacuous = false;  // even n: no claim, the witness is reported instead
    std::size_t witnesses_checked = 0;
    std::optional<std::vector<int>> counterexample;
    std::optional<double> counterexample_t;
    std::vector<int> even_witness;
};
OddCycleReport odd_cycle_optimality(int n, Grid grid = {});

struct TreeSearchReport {
    int trials = 0;
    int holds = 0;
    int holds_with_branch_root = 0;  // some valid root has degree >= 3 (non-path trees)
    int non_path_trees = 0;
    std::vector<std::pair<std::vector<std::pair<int, int>>, std::vector<int>>> counterexamples;
};
// True when some root r has |f(u) - f(r)| = d(u, r) for all u.
std::vector<int> distance_roots(const IntField& f);
TreeSearchReport tree_conjecture_search(int trials, int max_n, std::uint64_t seed);

}  // namespace lipcurv
