#pragma once

#include "lipcurv/core.hpp"
#include "lipcurv/metric.hpp"

#include <string>
#include <vector>

namespace lipcurv {

Graph complete_graph(int k);
Graph cycle_graph(int n);
Graph path_graph(int n);
Graph star_graph(int leaves);
Graph petersen_graph();
Graph complete_minus_edge(int k);
Graph hypercube_graph(int d);
Graph tripod_graph(int k);       // centre r, hairs x_1..x_k, y_1..y_k, z_1..z_2k
Graph tripod_star_graph(int k);  // long hairs x, y, z of k vertices, leaves w_1..w_k, plus w1z2, w1w2, w1w3
Graph tripod_star_tree(int k);   // the same without the three extra edges
Graph caterpillar_graph(int k);  // spine u_1..u_2k, leaves w_i attached to u_i
Graph six_vertex_graph();        // v1-v2-v3-v4 with w1 on v2 and w2 on v3
Graph power_law_graph(int n, double exponent, std::uint64_t seed, int min_degree = 2);

MetricSpace hypercube(int d);
MetricSpace boolean_levels(int n, const std::vector<int>& levels);
MetricSpace symmetric_group(int n);
MetricSpace scaled_edge(int r);

// Named family with integer parameters, e.g. ("tripod", {4}).
MetricSpace family(const std::string& name, const std::vector<int>& params);

// Parses "tripod:4", "levels:6:2,4", "product:l0:complete:3*complete:4",
// "powerlaw:100:2.5:7", or a path to a JSON file {"n":..,"edges":[[i,j],..]}.
MetricSpace parse_space(const std::string& spec);
Graph parse_graph(const std::string& spec);

}  // namespace lipcurv
