#include "lipcurv/families.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace lipcurv {

namespace {

std::vector<std::string> numbered(int n)
{
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back(std::to_string(i));
    return out;
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

int to_int(const std::string& s)
{
    try {
        std::size_t used = 0;
        int v = std::stoi(s, &used);
        if (used != s.size()) throw Error("bad-space", "not an integer: " + s);
        return v;
    } catch (const std::logic_error&) {
        throw Error("bad-space", "not an integer: " + s);
    }
}

void need(bool ok, const std::string& what)
{
    if (!ok) throw Error("bad-parameter", what);
}

}  // namespace

Graph complete_graph(int k)
{
    need(k >= 1, "complete graph needs k >= 1");
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) e.push_back({i, j});
    return build_graph(k, e, numbered(k));
}

Graph cycle_graph(int n)
{
    need(n >= 3, "cycle needs n >= 3");
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i) e.push_back({i, (i + 1) % n});
    return build_graph(n, e, numbered(n));
}

Graph path_graph(int n)
{
    need(n >= 1, "path needs n >= 1");
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
    return build_graph(n, e, numbered(n));
}

Graph star_graph(int leaves)
{
    need(leaves >= 1, "star needs a leaf");
    std::vector<std::pair<int, int>> e;
    for (int i = 1; i <= leaves; ++i) e.push_back({0, i});
    return build_graph(leaves + 1, e, numbered(leaves + 1));
}

Graph petersen_graph()
{
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < 5; ++i) {
        e.push_back({i, (i + 1) % 5});
        e.push_back({i, i + 5});
        e.push_back({5 + i, 5 + (i + 2) % 5});
    }
    return build_graph(10, e, numbered(10));
}

Graph complete_minus_edge(int k)
{
    need(k >= 3, "complete-minus-edge needs k >= 3");
    return remove_edge(complete_graph(k), 0, 1);
}

Graph hypercube_graph(int d)
{
    need(d >= 1 && d <= 16, "hypercube graph needs 1 <= d <= 16");
    return *MetricSpace::cube(d).graph();
}

Graph tripod_graph(int k)
{
    need(k >= 1, "tripod needs k >= 1");
    std::vector<std::pair<int, int>> e;
    std::vector<std::string> labels{"r"};
    auto hair = [&](const std::string& name, int first, int len) {
        for (int i = 1; i <= len; ++i) {
            labels.push_back(name + std::to_string(i));
            e.push_back({i == 1 ? 0 : first + i - 2, first + i - 1});
        }
    };
    hair("x", 1, k);
    hair("y", k + 1, k);
    hair("z", 2 * k + 1, 2 * k);
    return build_graph(4 * k + 1, e, labels);
}

Graph tripod_star_tree(int k)
{
    need(k >= 3, "tripod with star needs k >= 3");
    std::vector<std::pair<int, int>> e;
    std::vector<std::string> labels{"r"};
    auto hair = [&](const std::string& name, int first, int len) {
        for (int i = 1; i <= len; ++i) {
            labels.push_back(name + std::to_string(i));
            e.push_back({i == 1 ? 0 : first + i - 2, first + i - 1});
        }
    };
    hair("x", 1, k);
    hair("y", k + 1, k);
    hair("z", 2 * k + 1, k);
    for (int i = 1; i <= k; ++i) {
        labels.push_back("w" + std::to_string(i));
        e.push_back({0, 3 * k + i});
    }
    return build_graph(4 * k + 1, e, labels);
}

Graph tripod_star_graph(int k)
{
    Graph t = tripod_star_tree(k);
    auto e = t.edges;
    int w1 = 3 * k + 1, w2 = 3 * k + 2, w3 = 3 * k + 3, z2 = 2 * k + 2;
    e.push_back({w1, z2});
    e.push_back({w1, w2});
    e.push_back({w1, w3});
    return build_graph(t.n, e, t.labels);
}

Graph caterpillar_graph(int k)
{
    need(k >= 1, "caterpillar needs k >= 1");
    std::vector<std::pair<int, int>> e;
    std::vector<std::string> labels;
    for (int i = 1; i <= 2 * k; ++i) labels.push_back("u" + std::to_string(i));
    for (int i = 1; i <= 2 * k; ++i) labels.push_back("w" + std::to_string(i));
    for (int i = 0; i + 1 < 2 * k; ++i) e.push_back({i, i + 1});
    for (int i = 0; i < 2 * k; ++i) e.push_back({i, 2 * k + i});
    return build_graph(4 * k, e, labels);
}

Graph six_vertex_graph()
{
    return build_graph(6, {{0, 1}, {1, 2}, {2, 3}, {4, 1}, {5, 2}}, {"v1", "v2", "v3", "v4", "w1", "w2"});
}

Graph power_law_graph(int n, double exponent, std::uint64_t seed, int min_degree)
{
    if (!(exponent > 1.0)) throw Error("bad-exponent", "power-law exponent must exceed 1");
    need(n >= 3 && min_degree >= 1 && min_degree < n, "power-law graph needs n >= 3");
    Rng rng(seed);
    for (int attempt = 0; attempt < 32; ++attempt) {
        Rng r = rng.split(static_cast<std::uint64_t>(attempt));
        std::vector<double> weights;
        for (int k = min_degree; k < n; ++k) weights.push_back(std::pow(static_cast<double>(k), -exponent));
        std::discrete_distribution<int> law(weights.begin(), weights.end());
        std::vector<int> stubs;
        for (int v = 0; v < n; ++v) {
            int deg = min_degree + law(r);
            for (int j = 0; j < deg; ++j) stubs.push_back(v);
        }
        if (stubs.size() % 2) stubs.push_back(static_cast<int>(r.below(static_cast<std::uint64_t>(n))));
        std::shuffle(stubs.begin(), stubs.end(), r);
        std::set<std::pair<int, int>> edges;
        for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
            int u = stubs[i], v = stubs[i + 1];
            if (u != v) edges.insert({std::min(u, v), std::max(u, v)});
        }
        Graph raw = build_graph(n, {edges.begin(), edges.end()}, numbered(n), false);
        Graph g = largest_component(raw);
        if (g.n >= 3) return g;
    }
    throw Error("generation-failed", "no usable power-law sample");
}

MetricSpace hypercube(int d) { return MetricSpace::cube(d); }

MetricSpace boolean_levels(int n, const std::vector<int>& levels)
{
    need(n >= 1 && n <= 20, "boolean levels need 1 <= n <= 20");
    std::vector<std::uint64_t> pts;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m)
        if (std::find(levels.begin(), levels.end(), std::popcount(m)) != levels.end()) pts.push_back(m);
    need(!pts.empty(), "no points on the requested levels");
    need(pts.size() <= 8192, "level space too large");
    DistMatrix d(pts.size(), pts.size());
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        labels.push_back(subset_label(pts[i]));
        for (std::size_t j = 0; j < pts.size(); ++j) d(i, j) = static_cast<std::uint16_t>(std::popcount(pts[i] ^ pts[j]));
    }
    return MetricSpace::from_matrix(std::move(d), std::move(labels), MetricKind::hamming);
}

MetricSpace symmetric_group(int n)
{
    if (n < 1 || n > 8) throw Error("too-large", "symmetric group limited to n <= 8");
    std::vector<std::uint8_t> perm(n), coords;
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::string> labels;
    do {
        std::string l = "[";
        for (int i = 0; i < n; ++i) {
            coords.push_back(perm[i]);
            l += (i ? "," : "") + std::to_string(perm[i] + 1);
        }
        labels.push_back(l + "]");
    } while (std::next_permutation(perm.begin(), perm.end()));
    return MetricSpace::hamming_tuples(std::move(coords), n, std::move(labels));
}

MetricSpace scaled_edge(int r)
{
    need(r >= 1, "scaled edge needs r >= 1");
    DistMatrix d(2, 2);
    d << 0, static_cast<std::uint16_t>(r), static_cast<std::uint16_t>(r), 0;
    return MetricSpace::from_matrix(std::move(d), {"0", std::to_string(r)}, MetricKind::explicit_metric);
}

MetricSpace family(const std::string& name, const std::vector<int>& p)
{
    auto arg = [&](std::size_t i) {
        need(p.size() > i, name + " needs more parameters");
        return p[i];
    };
    MetricSpace s;
    if (name == "complete") s = MetricSpace::from_graph(complete_graph(arg(0)));
    else if (name == "cycle") s = MetricSpace::from_graph(cycle_graph(arg(0)));
    else if (name == "path") s = MetricSpace::from_graph(path_graph(arg(0)));
    else if (name == "star") s = MetricSpace::from_graph(star_graph(arg(0)));
    else if (name == "petersen") s = MetricSpace::from_graph(petersen_graph());
    else if (name == "complete_minus_edge") s = MetricSpace::from_graph(complete_minus_edge(arg(0)));
    else if (name == "hypercube") s = hypercube(arg(0));
    else if (name == "boolean_levels" || name == "levels") s = boolean_levels(arg(0), {p.begin() + 1, p.end()});
    else if (name == "symmetric_group") s = symmetric_group(arg(0));
    else if (name == "scaled_edge") s = scaled_edge(arg(0));
    else if (name == "tripod") s = MetricSpace::from_graph(tripod_graph(arg(0)));
    else if (name == "tripod_star") s = MetricSpace::from_graph(tripod_star_graph(arg(0)));
    else if (name == "caterpillar") s = MetricSpace::from_graph(caterpillar_graph(arg(0)));
    else if (name == "six_vertex") s = MetricSpace::from_graph(six_vertex_graph());
    else throw Error("unknown-family", name);
    std::string full = name;
    for (int x : p) full += ":" + std::to_string(x);
    s.set_name(full);
    return s;
}

MetricSpace parse_space(const std::string& spec)
{
    if (spec.size() > 5 && spec.substr(spec.size() - 5) == ".json") {
        auto g = MetricSpace::from_graph(parse_graph(spec));
        g.set_name(spec);
        return g;
    }
    auto parts = split(spec, ':');
    if (parts.empty()) throw Error("bad-space", "empty space description");
    const std::string& name = parts[0];
    if (name == "product") {
        if (parts.size() < 3) throw Error("bad-space", "product:<l1|l0|linf>:<space>*<space>...");
        ProductMetric m;
        if (parts[1] == "l1") m = ProductMetric::l1;
        else if (parts[1] == "l0") m = ProductMetric::l0;
        else if (parts[1] == "linf") m = ProductMetric::linf;
        else throw Error("bad-space", "unknown product metric " + parts[1]);
        std::string rest = spec.substr(name.size() + parts[1].size() + 2);
        std::vector<MetricSpace> factors;
        for (const auto& f : split(rest, '*')) factors.push_back(parse_space(f));
        auto s = product(factors, m);
        s.set_name(spec);
        return s;
    }
    if (name == "powerlaw") {
        if (parts.size() < 3) throw Error("bad-space", "powerlaw:<n>:<exponent>[:<seed>]");
        double exponent = 0;
        try {
            exponent = std::stod(parts[2]);
        } catch (const std::logic_error&) {
            throw Error("bad-space", "bad exponent " + parts[2]);
        }
        std::uint64_t seed = parts.size() > 3 ? static_cast<std::uint64_t>(to_int(parts[3])) : 1;
        auto s = MetricSpace::from_graph(power_law_graph(to_int(parts[1]), exponent, seed));
        s.set_name(spec);
        return s;
    }
    std::vector<int> params;
    for (std::size_t i = 1; i < parts.size(); ++i)
        for (const auto& x : split(parts[i], ',')) params.push_back(to_int(x));
    return family(name, params);
}

Graph parse_graph(const std::string& spec)
{
    if (spec.size() > 5 && spec.substr(spec.size() - 5) == ".json") {
        std::ifstream in(spec);
        if (!in) throw Error("bad-file", "cannot open " + spec);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw Error("bad-file", e.what());
        }
        if (!j.contains("n") || !j.contains("edges")) throw Error("bad-file", "graph JSON needs n and edges");
        std::vector<std::pair<int, int>> e;
        for (const auto& pair : j["edges"]) e.push_back({pair.at(0).get<int>(), pair.at(1).get<int>()});
        std::vector<std::string> labels;
        if (j.contains("labels"))
            for (const auto& l : j["labels"]) labels.push_back(l.get<std::string>());
        return build_graph(j["n"].get<int>(), e, labels);
    }
    auto s = parse_space(spec);
    if (!s.graph()) throw Error("not-a-graph", spec + " is not a graph metric");
    return *s.graph();
}

}  // namespace lipcurv
