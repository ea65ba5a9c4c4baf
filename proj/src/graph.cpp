#include "lipcurv/graph.hpp"

#include "lipcurv/core.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace lipcurv {

bool Graph::has_edge(int u, int v) const
{
    return std::binary_search(adj[u].begin(), adj[u].end(), v);
}

std::string Graph::label(int u) const
{
    return labels.empty() ? std::to_string(u) : labels[u];
}

int Graph::index_of(const std::string& name) const
{
    for (int u = 0; u < n; ++u)
        if (label(u) == name) return u;
    return -1;
}

Graph build_graph(int n, const std::vector<std::pair<int, int>>& edges,
                  std::vector<std::string> labels, bool require_connected)
{
    if (n <= 0) throw Error("empty", "graph needs at least one vertex");
    if (!labels.empty() && static_cast<int>(labels.size()) != n)
        throw Error("bad-labels", "label count differs from n");
    std::set<std::pair<int, int>> uniq;
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n) throw Error("bad-index", "edge endpoint out of range");
        if (u == v) throw Error("self-loop", "vertex " + std::to_string(u));
        uniq.insert({std::min(u, v), std::max(u, v)});
    }
    Graph g;
    g.n = n;
    g.adj.assign(n, {});
    g.edges.assign(uniq.begin(), uniq.end());
    for (auto [u, v] : g.edges) {
        g.adj[u].push_back(v);
        g.adj[v].push_back(u);
    }
    for (auto& a : g.adj) std::sort(a.begin(), a.end());
    g.labels = std::move(labels);
    if (require_connected && !is_connected(g)) throw Error("disconnected", "graph is not connected");
    return g;
}

std::vector<int> bfs(const Graph& g, const std::vector<int>& sources)
{
    std::vector<int> dist(g.n, -1);
    std::deque<int> queue;
    for (int s : sources) {
        if (dist[s] != 0) {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (int v : g.adj[u]) {
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    return dist;
}

std::vector<int> bfs(const Graph& g, int source) { return bfs(g, std::vector<int>{source}); }

bool is_connected(const Graph& g)
{
    auto d = bfs(g, 0);
    return std::none_of(d.begin(), d.end(), [](int x) { return x < 0; });
}

int diameter(const Graph& g)
{
    int best = 0;
    for (int u = 0; u < g.n; ++u) {
        auto d = bfs(g, u);
        best = std::max(best, *std::max_element(d.begin(), d.end()));
    }
    return best;
}

Graph cartesian_product(const Graph& a, const Graph& b)
{
    std::vector<std::pair<int, int>> edges;
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(a.n) * b.n);
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < b.n; ++j) labels.push_back("(" + a.label(i) + "," + b.label(j) + ")");
    for (int i = 0; i < a.n; ++i)
        for (auto [u, v] : b.edges) edges.push_back({i * b.n + u, i * b.n + v});
    for (auto [u, v] : a.edges)
        for (int j = 0; j < b.n; ++j) edges.push_back({u * b.n + j, v * b.n + j});
    return build_graph(a.n * b.n, edges, std::move(labels), false);
}

Graph largest_component(const Graph& g)
{
    std::vector<int> comp(g.n, -1);
    int best = -1, best_size = 0, count = 0;
    for (int s = 0; s < g.n; ++s) {
        if (comp[s] >= 0) continue;
        auto d = bfs(g, s);
        int size = 0;
        for (int u = 0; u < g.n; ++u)
            if (d[u] >= 0) {
                comp[u] = count;
                ++size;
            }
        if (size > best_size) {
            best_size = size;
            best = count;
        }
        ++count;
    }
    std::vector<int> index(g.n, -1);
    std::vector<std::string> labels;
    int m = 0;
    for (int u = 0; u < g.n; ++u)
        if (comp[u] == best) {
            index[u] = m++;
            labels.push_back(g.label(u));
        }
    std::vector<std::pair<int, int>> edges;
    for (auto [u, v] : g.edges)
        if (comp[u] == best) edges.push_back({index[u], index[v]});
    return build_graph(m, edges, std::move(labels));
}

Graph remove_edge(const Graph& g, int u, int v)
{
    std::vector<std::pair<int, int>> edges;
    for (auto e : g.edges)
        if (e != std::pair<int, int>{std::min(u, v), std::max(u, v)}) edges.push_back(e);
    return build_graph(g.n, edges, g.labels, false);
}

std::vector<std::vector<int>> find_hairs(const Graph& g)
{
    std::vector<std::vector<int>> hairs;
    if (g.n < 2) return hairs;
    for (int leaf = 0; leaf < g.n; ++leaf) {
        if (g.degree(leaf) != 1) continue;
        std::vector<int> walk{leaf};
        int prev = leaf, cur = g.adj[leaf][0];
        while (g.degree(cur) == 2) {
            walk.push_back(cur);
            int next = g.adj[cur][0] == prev ? g.adj[cur][1] : g.adj[cur][0];
            prev = cur;
            cur = next;
        }
        walk.push_back(cur);
        std::reverse(walk.begin(), walk.end());
        hairs.push_back(std::move(walk));
    }
    return hairs;
}

}  // namespace lipcurv
