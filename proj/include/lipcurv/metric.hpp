#pragma once

#include "lipcurv/graph.hpp"

#include <Eigen/Core>

#include <bit>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace lipcurv {

using DistMatrix = Eigen::Matrix<std::uint16_t, Eigen::Dynamic, Eigen::Dynamic>;

enum class MetricKind { graph, hamming, explicit_metric };
enum class ProductMetric { l1, l0, linf };

inline constexpr std::size_t default_point_cap = 1000000;

// Finite metric space with integer distances.  Points are 0..size()-1; the
// distance is either a stored matrix or computed from point coordinates
// (subsets of [d] as bitmasks, tuples under Hamming, or product tuples).
class MetricSpace {
public:
    MetricSpace() = default;

    static MetricSpace from_graph(Graph g);
    static MetricSpace from_matrix(DistMatrix d, std::vector<std::string> labels, MetricKind kind);
    static MetricSpace cube(int d);  // H_d, point index = subset bitmask (bit i <-> element i+1)
    static MetricSpace hamming_tuples(std::vector<std::uint8_t> coords, int width,
                                      std::vector<std::string> labels);

    std::size_t size() const { return n_; }
    MetricKind kind() const { return kind_; }
    const Graph* graph() const { return graph_.get(); }
    bool is_cube() const { return rep_ == Rep::cube; }
    int cube_dim() const { return width_; }
    const std::string& name() const { return name_; }
    void set_name(std::string n) { name_ = std::move(n); }

    int dist(std::size_t i, std::size_t j) const
    {
        switch (rep_) {
        case Rep::dense: return (*dense_)(i, j);
        case Rep::cube: return std::popcount(static_cast<std::uint64_t>(i ^ j));
        case Rep::tuples: return tuple_dist(i, j);
        case Rep::product: return product_dist(i, j);
        }
        return 0;
    }

    std::string label(std::size_t i) const;
    std::optional<std::size_t> find(const std::string& label) const;
    int eccentricity(std::size_t i) const;
    int diameter() const;

    // Coordinates of a product point, one index per factor.
    std::vector<std::size_t> coordinates(std::size_t i) const;
    const std::vector<MetricSpace>& factors() const { return factors_; }

    friend MetricSpace product(const std::vector<MetricSpace>& spaces, ProductMetric metric,
                               std::size_t cap);

private:
    enum class Rep { dense, cube, tuples, product };

    int tuple_dist(std::size_t i, std::size_t j) const;
    int product_dist(std::size_t i, std::size_t j) const;

    Rep rep_ = Rep::dense;
    MetricKind kind_ = MetricKind::explicit_metric;
    std::size_t n_ = 0;
    int width_ = 0;
    std::shared_ptr<const DistMatrix> dense_;
    std::shared_ptr<const std::vector<std::uint8_t>> coords_;
    std::shared_ptr<const std::vector<std::string>> labels_;
    std::shared_ptr<const Graph> graph_;
    std::vector<MetricSpace> factors_;
    std::vector<std::size_t> strides_;
    ProductMetric combine_ = ProductMetric::l1;
    std::string name_;
};

MetricSpace shortest_path_metric(const Graph& g);
MetricSpace product(const std::vector<MetricSpace>& spaces, ProductMetric metric,
                    std::size_t cap = default_point_cap);
MetricSpace subspace(const MetricSpace& space, const std::vector<std::size_t>& points);

std::string subset_label(std::uint64_t mask);  // "{1,3}", "{}" for the empty set
std::optional<std::uint64_t> parse_subset(const std::string& text, int d);

// Exhaustive on spaces up to `exhaustive_limit` points, sampled above.
bool satisfies_metric_axioms(const MetricSpace& s, std::size_t exhaustive_limit = 1000,
                             std::size_t samples = 100000, std::uint64_t seed = 1);

}  // namespace lipcurv
