#pragma once

#include <string>
#include <utility>
#include <vector>

namespace lipcurv {

struct Graph {
    int n = 0;
    std::vector<std::vector<int>> adj;       // sorted neighbour lists
    std::vector<std::pair<int, int>> edges;  // u < v, sorted
    std::vector<std::string> labels;

    int degree(int u) const { return static_cast<int>(adj[u].size()); }
    bool has_edge(int u, int v) const;
    std::string label(int u) const;
    int index_of(const std::string& label) const;  // -1 when absent
};

Graph build_graph(int n, const std::vector<std::pair<int, int>>& edges,
                  std::vector<std::string> labels = {}, bool require_connected = true);

bool is_connected(const Graph& g);
std::vector<int> bfs(const Graph& g, int source);
std::vector<int> bfs(const Graph& g, const std::vector<int>& sources);
int diameter(const Graph& g);

Graph cartesian_product(const Graph& a, const Graph& b);
Graph largest_component(const Graph& g);
Graph remove_edge(const Graph& g, int u, int v);

// Pendant paths w_0..w_k, one per leaf w_k, listed with w_0 first and ordered
// by leaf index.  A path graph yields both mirror images.
std::vector<std::vector<int>> find_hairs(const Graph& g);

}  // namespace lipcurv
