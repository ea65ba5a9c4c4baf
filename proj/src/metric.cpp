#include "lipcurv/metric.hpp"

#include "lipcurv/core.hpp"

#include <algorithm>
#include <sstream>

namespace lipcurv {

MetricSpace MetricSpace::from_graph(Graph g)
{
    if (g.n > 8192) throw Error("too-large", "graph metric limited to 8192 vertices");
    if (!is_connected(g)) throw Error("disconnected", "graph is not connected");
    auto d = std::make_shared<DistMatrix>(g.n, g.n);
    for (int u = 0; u < g.n; ++u) {
        auto row = bfs(g, u);
        for (int v = 0; v < g.n; ++v) (*d)(u, v) = static_cast<std::uint16_t>(row[v]);
    }
    MetricSpace s;
    s.rep_ = Rep::dense;
    s.kind_ = MetricKind::graph;
    s.n_ = static_cast<std::size_t>(g.n);
    s.dense_ = d;
    std::vector<std::string> labels;
    for (int u = 0; u < g.n; ++u) labels.push_back(g.label(u));
    s.labels_ = std::make_shared<std::vector<std::string>>(std::move(labels));
    s.graph_ = std::make_shared<Graph>(std::move(g));
    return s;
}

MetricSpace MetricSpace::from_matrix(DistMatrix d, std::vector<std::string> labels, MetricKind kind)
{
    if (d.rows() != d.cols()) throw Error("bad-matrix", "distance matrix must be square");
    if (!labels.empty() && static_cast<Eigen::Index>(labels.size()) != d.rows())
        throw Error("bad-labels", "label count differs from matrix size");
    MetricSpace s;
    s.rep_ = Rep::dense;
    s.kind_ = kind;
    s.n_ = static_cast<std::size_t>(d.rows());
    s.dense_ = std::make_shared<DistMatrix>(std::move(d));
    if (labels.empty())
        for (std::size_t i = 0; i < s.n_; ++i) labels.push_back(std::to_string(i));
    s.labels_ = std::make_shared<std::vector<std::string>>(std::move(labels));
    return s;
}

MetricSpace MetricSpace::cube(int d)
{
    if (d < 0 || d > 24) throw Error("too-large", "hypercube dimension limited to 24");
    MetricSpace s;
    s.rep_ = Rep::cube;
    s.kind_ = MetricKind::graph;
    s.n_ = std::size_t{1} << d;
    s.width_ = d;
    if (d <= 16) {
        Graph g;
        g.n = static_cast<int>(s.n_);
        g.adj.assign(s.n_, {});
        for (std::size_t u = 0; u < s.n_; ++u) {
            for (int b = 0; b < d; ++b) {
                std::size_t v = u ^ (std::size_t{1} << b);
                g.adj[u].push_back(static_cast<int>(v));
                if (u < v) g.edges.push_back({static_cast<int>(u), static_cast<int>(v)});
            }
            std::sort(g.adj[u].begin(), g.adj[u].end());
        }
        std::sort(g.edges.begin(), g.edges.end());
        for (std::size_t u = 0; u < s.n_; ++u) g.labels.push_back(subset_label(u));
        s.graph_ = std::make_shared<Graph>(std::move(g));
    }
    return s;
}

MetricSpace MetricSpace::hamming_tuples(std::vector<std::uint8_t> coords, int width,
                                        std::vector<std::string> labels)
{
    MetricSpace s;
    s.rep_ = Rep::tuples;
    s.kind_ = MetricKind::hamming;
    s.width_ = width;
    s.n_ = coords.size() / static_cast<std::size_t>(width);
    s.coords_ = std::make_shared<std::vector<std::uint8_t>>(std::move(coords));
    s.labels_ = std::make_shared<std::vector<std::string>>(std::move(labels));
    return s;
}

int MetricSpace::tuple_dist(std::size_t i, std::size_t j) const
{
    const std::uint8_t* a = coords_->data() + i * width_;
    const std::uint8_t* b = coords_->data() + j * width_;
    int d = 0;
    for (int k = 0; k < width_; ++k) d += a[k] != b[k];
    return d;
}

std::vector<std::size_t> MetricSpace::coordinates(std::size_t i) const
{
    std::vector<std::size_t> c(factors_.size());
    for (std::size_t k = 0; k < factors_.size(); ++k) {
        c[k] = i / strides_[k];
        i %= strides_[k];
    }
    return c;
}

int MetricSpace::product_dist(std::size_t i, std::size_t j) const
{
    int total = 0;
    for (std::size_t k = 0; k < factors_.size(); ++k) {
        std::size_t a = i / strides_[k], b = j / strides_[k];
        i %= strides_[k];
        j %= strides_[k];
        int dk = factors_[k].dist(a, b);
        switch (combine_) {
        case ProductMetric::l1: total += dk; break;
        case ProductMetric::l0: total += dk != 0; break;
        case ProductMetric::linf: total = std::max(total, dk); break;
        }
    }
    return total;
}

std::string MetricSpace::label(std::size_t i) const
{
    switch (rep_) {
    case Rep::cube: return subset_label(i);
    case Rep::product: {
        auto c = coordinates(i);
        std::string out = "(";
        for (std::size_t k = 0; k < c.size(); ++k) {
            if (k) out += ",";
            out += factors_[k].label(c[k]);
        }
        return out + ")";
    }
    default: return (*labels_)[i];
    }
}

std::optional<std::size_t> MetricSpace::find(const std::string& text) const
{
    if (rep_ == Rep::cube) {
        if (auto m = parse_subset(text, width_)) return static_cast<std::size_t>(*m);
        return std::nullopt;
    }
    for (std::size_t i = 0; i < n_; ++i)
        if (label(i) == text) return i;
    return std::nullopt;
}

int MetricSpace::eccentricity(std::size_t i) const
{
    if (rep_ == Rep::cube) return width_;
    int e = 0;
    for (std::size_t j = 0; j < n_; ++j) e = std::max(e, dist(i, j));
    return e;
}

int MetricSpace::diameter() const
{
    if (rep_ == Rep::cube) return width_;
    if (rep_ == Rep::dense) return static_cast<int>(dense_->maxCoeff());
    int e = 0;
    for (std::size_t i = 0; i < n_; ++i) e = std::max(e, eccentricity(i));
    return e;
}

MetricSpace shortest_path_metric(const Graph& g) { return MetricSpace::from_graph(g); }

MetricSpace product(const std::vector<MetricSpace>& spaces, ProductMetric metric, std::size_t cap)
{
    if (spaces.empty()) throw Error("empty", "product of no spaces");
    std::size_t total = 1;
    for (const auto& s : spaces) {
        if (s.size() == 0 || total > cap / s.size()) throw Error("too-large", "product exceeds point cap");
        total *= s.size();
    }
    MetricSpace p;
    p.rep_ = MetricSpace::Rep::product;
    p.n_ = total;
    p.factors_ = spaces;
    p.combine_ = metric;
    p.strides_.assign(spaces.size(), 1);
    for (std::size_t k = spaces.size(); k-- > 1;) p.strides_[k - 1] = p.strides_[k] * spaces[k].size();
    bool graphs = std::all_of(spaces.begin(), spaces.end(), [](const MetricSpace& s) { return s.graph(); });
    if (metric == ProductMetric::l1 && graphs) {
        p.kind_ = MetricKind::graph;
        if (total <= (std::size_t{1} << 17)) {
            Graph g = *spaces[0].graph();
            for (std::size_t k = 1; k < spaces.size(); ++k) g = cartesian_product(g, *spaces[k].graph());
            p.graph_ = std::make_shared<Graph>(std::move(g));
        }
    } else {
        p.kind_ = metric == ProductMetric::l0 ? MetricKind::hamming : MetricKind::explicit_metric;
    }
    return p;
}

MetricSpace subspace(const MetricSpace& space, const std::vector<std::size_t>& points)
{
    DistMatrix d(points.size(), points.size());
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < points.size(); ++i) {
        labels.push_back(space.label(points[i]));
        for (std::size_t j = 0; j < points.size(); ++j)
            d(i, j) = static_cast<std::uint16_t>(space.dist(points[i], points[j]));
    }
    auto kind = space.kind() == MetricKind::graph ? MetricKind::explicit_metric : space.kind();
    return MetricSpace::from_matrix(std::move(d), std::move(labels), kind);
}

std::string subset_label(std::uint64_t mask)
{
    std::string out = "{";
    bool first = true;
    for (int b = 0; b < 64; ++b) {
        if (mask >> b & 1) {
            if (!first) out += ",";
            out += std::to_string(b + 1);
            first = false;
        }
    }
    return out + "}";
}

std::optional<std::uint64_t> parse_subset(const std::string& text, int d)
{
    std::string body;
    for (char c : text)
        if (c != '{' && c != '}' && c != ' ') body += c;
    std::uint64_t mask = 0;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        int e = 0;
        try {
            e = std::stoi(item);
        } catch (...) {
            return std::nullopt;
        }
        if (e < 1 || e > d) return std::nullopt;
        mask |= std::uint64_t{1} << (e - 1);
    }
    return mask;
}

bool satisfies_metric_axioms(const MetricSpace& s, std::size_t exhaustive_limit, std::size_t samples,
                             std::uint64_t seed)
{
    const std::size_t n = s.size();
    auto ok = [&](std::size_t i, std::size_t j, std::size_t k) {
        return s.dist(i, j) == s.dist(j, i) && s.dist(i, j) <= s.dist(i, k) + s.dist(k, j) &&
               (i != j || s.dist(i, j) == 0) && (i == j || s.dist(i, j) > 0);
    };
    if (n <= exhaustive_limit) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k)
                    if (!ok(i, j, k)) return false;
        return true;
    }
    Rng rng(seed);
    for (std::size_t t = 0; t < samples; ++t)
        if (!ok(rng.below(n), rng.below(n), rng.below(n))) return false;
    return true;
}

}  // namespace lipcurv
