#include "lipcurv/lipschitz.hpp"

#include "lipcurv/families.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>

namespace lipcurv {

namespace {

template <class Field>
Rational exact_mean(const Field& f)
{
    Rational s = 0;
    for (std::size_t i = 0; i < f.size(); ++i) s += Rational(f[i]);
    return s / static_cast<long>(f.size());
}

template <class Field>
Rational exact_variance(const Field& f)
{
    Rational m = exact_mean(f), s = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        Rational d = Rational(f[i]) - m;
        s += d * d;
    }
    return s / static_cast<long>(f.size());
}

// Pairs (u,v) whose distance does not split through a third point.  Lipschitz
// and tightness on these pairs imply the same on all pairs.
struct Constraints {
    int n = 0;
    std::vector<std::vector<std::pair<int, int>>> nbr;  // (v, d(u,v))
};

Constraints constraint_structure(const MetricSpace& s)
{
    Constraints c;
    c.n = static_cast<int>(s.size());
    c.nbr.assign(c.n, {});
    if (const Graph* g = s.graph()) {
        for (auto [u, v] : g->edges) {
            c.nbr[u].push_back({v, 1});
            c.nbr[v].push_back({u, 1});
        }
        return c;
    }
    for (int u = 0; u < c.n; ++u)
        for (int v = u + 1; v < c.n; ++v) {
            int duv = s.dist(u, v);
            bool split = false;
            for (int w = 0; w < c.n && !split; ++w)
                if (w != u && w != v && s.dist(u, w) + s.dist(w, v) == duv) split = true;
            if (!split) {
                c.nbr[u].push_back({v, duv});
                c.nbr[v].push_back({u, duv});
            }
        }
    return c;
}

std::vector<std::vector<bool>> bridges(const Constraints& c)
{
    std::vector<std::vector<bool>> is_bridge(c.n);
    for (int u = 0; u < c.n; ++u) is_bridge[u].assign(c.nbr[u].size(), false);
    std::vector<int> disc(c.n, -1), low(c.n, 0);
    int timer = 0;
    // Iterative Tarjan; the parent edge is skipped by index so parallel pairs never occur.
    for (int root = 0; root < c.n; ++root) {
        if (disc[root] >= 0) continue;
        std::vector<std::tuple<int, int, std::size_t>> stack{{root, -1, 0}};
        disc[root] = low[root] = timer++;
        while (!stack.empty()) {
            auto& [u, parent, i] = stack.back();
            if (i < c.nbr[u].size()) {
                int v = c.nbr[u][i].first;
                ++i;
                if (v == parent) continue;
                if (disc[v] < 0) {
                    disc[v] = low[v] = timer++;
                    stack.push_back({v, u, 0});
                } else {
                    low[u] = std::min(low[u], disc[v]);
                }
            } else {
                int done = u, p = parent;
                stack.pop_back();
                if (p >= 0) {
                    low[p] = std::min(low[p], low[done]);
                    if (low[done] > disc[p]) {
                        for (std::size_t k = 0; k < c.nbr[p].size(); ++k)
                            if (c.nbr[p][k].first == done) is_bridge[p][k] = true;
                        for (std::size_t k = 0; k < c.nbr[done].size(); ++k)
                            if (c.nbr[done][k].first == p) is_bridge[done][k] = true;
                    }
                }
            }
        }
    }
    return is_bridge;
}

struct UnionFind {
    std::vector<int> p;
    explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x)
    {
        while (p[x] != x) x = p[x] = p[p[x]];
        return x;
    }
    bool unite(int a, int b)
    {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        p[a] = b;
        return true;
    }
};

class Enumerator {
public:
    Enumerator(const MetricSpace& s, std::size_t anchor, const EnumOptions& opt,
               const std::function<void(const std::vector<int>&)>& visit)
        : c_(constraint_structure(s)), opt_(opt), visit_(visit)
    {
        const int n = c_.n;
        auto br = bridges(c_);
        // BFS order over the constraint graph starting at the anchor.
        std::vector<int> seen(n, 0);
        order_.push_back(static_cast<int>(anchor));
        seen[anchor] = 1;
        for (std::size_t h = 0; h < order_.size(); ++h)
            for (auto [v, w] : c_.nbr[order_[h]])
                if (!seen[v]) {
                    seen[v] = 1;
                    order_.push_back(v);
                }
        if (static_cast<int>(order_.size()) != n) throw Error("disconnected", "constraint graph is disconnected");
        pos_.assign(n, 0);
        for (int p = 0; p < n; ++p) pos_[order_[p]] = p;

        earlier_.assign(n, {});
        closing_.assign(n, {});
        for (int p = 0; p < n; ++p) {
            int u = order_[p];
            int last = p;
            for (std::size_t k = 0; k < c_.nbr[u].size(); ++k) {
                auto [v, w] = c_.nbr[u][k];
                if (pos_[v] < p) earlier_[p].push_back({pos_[v], w, static_cast<bool>(br[u][k])});
                last = std::max(last, pos_[v]);
            }
            closing_[last].push_back(p);
        }
        nbr_pos_.assign(n, {});
        for (int p = 0; p < n; ++p)
            for (auto [v, w] : c_.nbr[order_[p]]) nbr_pos_[p].push_back({pos_[v], w});

        twin_prev_.assign(n, -1);
        if (opt.reduce_twins) {
            std::map<std::vector<std::pair<int, int>>, int> last_of;
            for (int p = 1; p < n; ++p) {
                auto sig = c_.nbr[order_[p]];
                std::sort(sig.begin(), sig.end());
                auto it = last_of.find(sig);
                if (it != last_of.end()) twin_prev_[p] = it->second;
                last_of[sig] = p;
            }
        }
        f_.assign(n, 0);
        out_.assign(n, 0);
    }

    std::uint64_t run()
    {
        if (c_.n == 1) {
            visit_(out_);
            return 1;
        }
        rec(1);
        return count_;
    }

private:
    bool has_tight(int p) const
    {
        for (auto [q, w] : nbr_pos_[p])
            if (std::abs(f_[p] - f_[q]) == w) return true;
        return false;
    }

    void rec(int p)
    {
        if (++nodes_ > opt_.max_nodes) throw Error("too-large", "enumeration node budget exhausted");
        const int n = c_.n;
        if (p == n) {
            UnionFind uf(n);
            int joins = 0;
            for (int a = 0; a < n; ++a)
                for (auto [b, w] : nbr_pos_[a])
                    if (a < b && std::abs(f_[a] - f_[b]) == w && uf.unite(a, b)) ++joins;
            if (joins != n - 1) return;
            for (int a = 0; a < n; ++a) out_[order_[a]] = f_[a];
            ++count_;
            visit_(out_);
            return;
        }
        int lo = std::numeric_limits<int>::min() / 2, hi = std::numeric_limits<int>::max() / 2;
        int bridge_q = -1, bridge_w = 0;
        for (auto [q, w, bridge] : earlier_[p]) {
            lo = std::max(lo, f_[q] - w);
            hi = std::min(hi, f_[q] + w);
            if (bridge) {
                bridge_q = q;
                bridge_w = w;
            }
        }
        if (lo > hi) return;
        if (twin_prev_[p] >= 0) lo = std::max(lo, f_[twin_prev_[p]]);
        auto try_value = [&](int x) {
            if (x < lo || x > hi) return;
            f_[p] = x;
            for (int c : closing_[p])
                if (!has_tight(c)) return;
            rec(p + 1);
        };
        if (bridge_q >= 0) {
            try_value(f_[bridge_q] - bridge_w);
            if (bridge_w != 0) try_value(f_[bridge_q] + bridge_w);
        } else {
            for (int x = lo; x <= hi; ++x) try_value(x);
        }
    }

    Constraints c_;
    EnumOptions opt_;
    const std::function<void(const std::vector<int>&)>& visit_;
    std::vector<int> order_, pos_;
    std::vector<std::vector<std::tuple<int, int, bool>>> earlier_;
    std::vector<std::vector<int>> closing_;
    std::vector<std::vector<std::pair<int, int>>> nbr_pos_;
    std::vector<int> twin_prev_;
    std::vector<int> f_, out_;
    std::uint64_t nodes_ = 0, count_ = 0;
};

double profile_log_moment(const std::vector<int>& values, const std::vector<int>& counts, double t)
{
    double total = 0, sum = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        total += counts[i];
        sum += static_cast<double>(counts[i]) * values[i];
    }
    double mean = sum / total;
    double m = -std::numeric_limits<double>::infinity();
    for (int v : values) m = std::max(m, t * (v - mean));
    double acc = 0;
    for (std::size_t i = 0; i < values.size(); ++i) acc += counts[i] * std::exp(t * (values[i] - mean) - m);
    return m + std::log(acc / total);
}

std::vector<int> anchored(std::vector<int> f, std::size_t anchor)
{
    int a = f[anchor];
    for (int& x : f) x -= a;
    return f;
}

bool lipschitz_ints(const MetricSpace& s, const std::vector<int>& f)
{
    for (std::size_t u = 0; u < s.size(); ++u)
        for (std::size_t v = u + 1; v < s.size(); ++v)
            if (std::abs(f[u] - f[v]) > s.dist(u, v)) return false;
    return true;
}

// Coordinate ascent: each point moves to an end of its feasible interval when
// that raises the objective (variance for t = 0, L_f(t) otherwise).
std::vector<int> ascend(const MetricSpace& s, std::vector<int> f, double t)
{
    const std::size_t n = s.size();
    const double N = static_cast<double>(n);
    for (int pass = 0; pass < 40; ++pass) {
        bool moved = false;
        for (std::size_t u = 0; u < n; ++u) {
            int lo = std::numeric_limits<int>::min(), hi = std::numeric_limits<int>::max();
            for (std::size_t v = 0; v < n; ++v) {
                if (v == u) continue;
                int d = s.dist(u, v);
                lo = std::max(lo, f[v] - d);
                hi = std::min(hi, f[v] + d);
            }
            if (n == 1) break;
            long long s1 = 0, s2 = 0;
            double e = 0;
            for (std::size_t v = 0; v < n; ++v)
                if (v != u) {
                    s1 += f[v];
                    s2 += static_cast<long long>(f[v]) * f[v];
                    if (t > 0) e += std::exp(t * f[v]);
                }
            auto score = [&](int x) {
                if (t == 0) {
                    long long a = s1 + x, b = s2 + static_cast<long long>(x) * x;
                    return static_cast<double>(static_cast<long long>(n) * b - a * a);
                }
                return std::log((e + std::exp(t * x)) / N) - t * (s1 + x) / N;
            };
            double cur = score(f[u]);
            int best = f[u];
            double best_score = cur;
            for (int x : {lo, hi}) {
                double sc = score(x);
                if (sc > best_score + 1e-12 * (1 + std::abs(best_score))) {
                    best = x;
                    best_score = sc;
                }
            }
            if (best != f[u]) {
                f[u] = best;
                moved = true;
            }
        }
        if (!moved) break;
    }
    return f;
}

}  // namespace

Rational mean(const IntField& f) { return exact_mean(f); }
Rational variance(const IntField& f) { return exact_variance(f); }
Rational mean(const ExactField& f) { return exact_mean(f); }
Rational variance(const ExactField& f) { return exact_variance(f); }

double mean(const RealField& f) { return f.values.mean(); }
double variance(const RealField& f)
{
    double m = mean(f);
    return (f.values.array() - m).square().mean();
}

double log_moment(const std::vector<double>& input, double t)
{
    if (input.empty()) return 0;
    // Sorted summation makes the value a function of the multiset alone.
    std::vector<double> values(input);
    std::sort(values.begin(), values.end());
    double mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
    double m = -std::numeric_limits<double>::infinity();
    for (double v : values) m = std::max(m, t * (v - mean));
    double acc = 0;
    for (double v : values) acc += std::exp(t * (v - mean) - m);
    return m + std::log(acc / values.size());
}

std::uint64_t for_each_extremal_field(const MetricSpace& s, std::size_t anchor, const EnumOptions& opt,
                                      const std::function<void(const std::vector<int>&)>& visit)
{
    if (s.size() == 0) throw Error("empty", "empty space");
    if (s.size() > opt.max_points)
        throw Error("too-large", "exhaustive enumeration limited to " + std::to_string(opt.max_points) + " points");
    if (anchor >= s.size()) throw Error("bad-index", "anchor out of range");
    Enumerator e(s, anchor, opt, visit);
    return e.run();
}

std::vector<IntField> enumerate_extremal_fields(const MetricSpace& s, std::size_t anchor, EnumOptions opt)
{
    std::vector<IntField> out;
    for_each_extremal_field(s, anchor, opt,
                            [&](const std::vector<int>& f) { out.push_back(make_field(s, f, anchor)); });
    return out;
}

MaxVariance max_variance(const MetricSpace& s, EnumOptions opt, std::size_t max_witnesses)
{
    MaxVariance out;
    const long long n = static_cast<long long>(s.size());
    long long best = -1;
    std::vector<std::vector<int>> wit;
    out.fields = for_each_extremal_field(s, 0, opt, [&](const std::vector<int>& f) {
        long long s1 = 0, s2 = 0;
        for (int x : f) {
            s1 += x;
            s2 += static_cast<long long>(x) * x;
        }
        long long key = n * s2 - s1 * s1;
        if (key > best) {
            best = key;
            wit.clear();
            out.witnesses_truncated = false;
        }
        if (key == best) {
            if (wit.size() < max_witnesses) wit.push_back(f);
            else out.witnesses_truncated = true;
        }
    });
    out.c2 = Rational(best) / Rational(n * n);
    for (auto& f : wit) out.witnesses.push_back(make_field(s, f, 0));
    return out;
}

double ValueProfile::log_moment(double t) const { return profile_log_moment(values, counts, t); }

Rational ValueProfile::variance() const
{
    long long n = 0, s1 = 0, s2 = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        n += counts[i];
        s1 += static_cast<long long>(counts[i]) * values[i];
        s2 += static_cast<long long>(counts[i]) * values[i] * values[i];
    }
    return Rational(n * s2 - s1 * s1) / Rational(n * n);
}

void FieldPool::add(const std::vector<int>& field)
{
    ++fields_;
    int lo = *std::min_element(field.begin(), field.end());
    std::map<int, int> hist;
    for (int x : field) ++hist[x - lo];
    std::string key;
    for (auto [v, c] : hist) {
        key += std::to_string(v) + ":" + std::to_string(c) + ",";
    }
    auto it = index_.find(key);
    if (it == index_.end()) {
        ValueProfile p;
        for (auto [v, c] : hist) {
            p.values.push_back(v);
            p.counts.push_back(c);
        }
        p.representative = field;
        it = index_.emplace(key, profiles_.size()).first;
        profiles_.push_back(std::move(p));
    }
    auto& p = profiles_[it->second];
    ++p.members;
    if (keep_) p.all_members.push_back(field);
}

std::vector<double> Grid::values() const
{
    std::vector<double> t(points);
    if (points == 1) return {tmin};
    for (int i = 0; i < points; ++i) t[i] = tmin * std::pow(tmax / tmin, static_cast<double>(i) / (points - 1));
    return t;
}

LogMomentCurve log_moment_envelope(const FieldPool& pool, const std::vector<double>& t)
{
    LogMomentCurve c;
    c.t = t;
    const auto& ps = pool.profiles();
    for (double x : t) {
        std::vector<double> vals(ps.size());
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < ps.size(); ++i) {
            vals[i] = ps[i].log_moment(x);
            best = std::max(best, vals[i]);
        }
        std::vector<std::size_t> w;
        for (std::size_t i = 0; i < ps.size(); ++i)
            if (vals[i] >= best - 1e-12) w.push_back(i);
        c.value.push_back(best);
        c.witness.push_back(std::move(w));
    }
    return c;
}

FieldPool candidate_pool(const MetricSpace& s, const PoolOptions& opt, bool* exhaustive)
{
    FieldPool pool(opt.keep_members);
    if (s.size() <= std::min(opt.exhaustive_limit, opt.enumeration.max_points)) {
        try {
            FieldPool full(opt.keep_members);
            for_each_extremal_field(s, 0, opt.enumeration, [&](const std::vector<int>& f) { full.add(f); });
            if (exhaustive) *exhaustive = true;
            return full;
        } catch (const Error& e) {
            if (e.code() != "too-large") throw;
        }
    }
    if (exhaustive) *exhaustive = false;
    const std::size_t n = s.size();
    Rng rng(opt.seed);
    std::vector<std::vector<int>> starts;
    auto dist_field = [&](std::size_t p, int sign) {
        std::vector<int> f(n);
        for (std::size_t u = 0; u < n; ++u) f[u] = sign * s.dist(p, u);
        return f;
    };
    if (n <= 4096)
        for (std::size_t p = 0; p < n; ++p)
            for (int sign : {1, -1}) pool.add(anchored(dist_field(p, sign), 0));
    for (const auto& seed : opt.seeds) {
        if (seed.size() != n || !lipschitz_ints(s, seed)) throw Error("bad-seed", "seed field is not 1-Lipschitz");
        std::vector<int> neg(seed);
        for (int& x : neg) x = -x;
        starts.push_back(seed);
        starts.push_back(neg);
    }
    starts.push_back(dist_field(0, 1));
    starts.push_back(dist_field(0, -1));
    for (int i = 0; i < 3; ++i) {
        std::size_t p = rng.below(n);
        starts.push_back(dist_field(p, 1));
        starts.push_back(dist_field(p, -1));
    }
    for (const auto& st : starts) {
        pool.add(anchored(st, 0));
        for (double t : {0.0, 0.5, 1.0, 2.0}) pool.add(anchored(ascend(s, st, t), 0));
    }
    return pool;
}

SubgaussianEstimate subgaussian_constant(const MetricSpace& s, Grid grid, PoolOptions opt)
{
    SubgaussianEstimate est;
    est.grid = grid;
    opt.enumeration.reduce_twins = true;
    bool exhaustive = true;
    FieldPool pool = candidate_pool(s, opt, &exhaustive);
    est.exhaustive = exhaustive;
    est.fields = pool.fields();
    est.profiles = pool.profiles().size();
    auto t = grid.values();
    auto curve = log_moment_envelope(pool, t);
    double grid_sup = -1;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        double r = 2 * curve.value[i] / (t[i] * t[i]);
        if (r > grid_sup) {
            grid_sup = r;
            arg = i;
        }
    }
    est.smallest_t_ratio = t.empty() ? 0 : 2 * curve.value[0] / (t[0] * t[0]);
    Rational c2 = -1;
    std::size_t var_arg = 0;
    const auto& ps = pool.profiles();
    for (std::size_t i = 0; i < ps.size(); ++i) {
        Rational v = ps[i].variance();
        if (v > c2) {
            c2 = v;
            var_arg = i;
        }
    }
    est.c2 = c2;
    double c2d = to_double(c2);
    if (c2d >= grid_sup) {
        est.sigma2_lower = c2d;
        est.t_star = 0;
        est.witness = make_field(s, ps[var_arg].representative, 0);
    } else {
        est.sigma2_lower = grid_sup;
        est.t_star = t[arg];
        est.witness = make_field(s, ps[curve.witness[arg].front()].representative, 0);
    }
    est.sigma2_grid_sup = est.sigma2_lower;
    return est;
}

StructureReport structure_checks(const ExactField& f, const Graph& g)
{
    StructureReport r;
    const int n = g.n;
    if (static_cast<int>(f.size()) != n) throw Error("bad-field", "field size differs from graph order");
    Rational E = mean(f);
    Rational half(1, 2);
    for (int v = 0; v < n; ++v) {
        Rational d = f[v] - E;
        if (d > -half && d <= half) r.origin_set.push_back(static_cast<std::size_t>(v));
    }
    auto fail = [](CheckOutcome& c, std::size_t u, std::string why) {
        if (!c.pass) return;
        c.pass = false;
        c.witness = u;
        c.detail = std::move(why);
    };

    // (a) hairs: two monotone runs with constant steps.
    for (const auto& hair : find_hairs(g)) {
        std::vector<Rational> step;
        for (std::size_t i = 1; i < hair.size(); ++i) step.push_back(f[hair[i]] - f[hair[i - 1]]);
        bool ok = false;
        for (std::size_t l = 0; l <= step.size() && !ok; ++l) {
            bool a = std::all_of(step.begin(), step.begin() + l, [&](const Rational& x) { return x == step[0]; });
            bool b = std::all_of(step.begin() + l, step.end(), [&](const Rational& x) { return x == step[l < step.size() ? l : 0]; });
            ok = a && b;
        }
        if (!ok) fail(r.unimodal_hairs, static_cast<std::size_t>(hair.back()), "hair is not unimodular");
    }

    // (d) and the lower-half ascent property.
    for (int u = 0; u < n; ++u) {
        bool down = false, up = false;
        for (int v : g.adj[u]) {
            if (f[v] == f[u] - 1) down = true;
            if (f[v] == f[u] + 1) up = true;
        }
        if (f[u] >= E && !down) fail(r.descent, u, "no neighbour one below");
        if (f[u] < E && !up) fail(r.ascent_below, u, "no neighbour one above");
    }

    if (r.origin_set.empty()) {
        fail(r.origin, 0, "empty origin set");
        fail(r.origin_below, 0, "empty origin set");
        return r;
    }
    Rational nu = f[r.origin_set.front()];
    for (auto v : r.origin_set)
        if (f[v] != nu) {
            fail(r.origin, v, "field is not constant on the origin set");
            fail(r.origin_below, v, "field is not constant on the origin set");
            return r;
        }
    std::vector<int> sources(r.origin_set.begin(), r.origin_set.end());
    auto dO = bfs(g, sources);
    std::vector<int> comp(n, -1);
    std::vector<bool> in_origin(n, false);
    for (auto v : r.origin_set) in_origin[v] = true;
    int ncomp = 0;
    for (int s = 0; s < n; ++s) {
        if (in_origin[s] || comp[s] >= 0) continue;
        std::vector<int> stack{s};
        comp[s] = ncomp;
        int sign = 0;
        bool mixed = false;
        std::vector<int> members;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            members.push_back(u);
            int su = f[u] > nu ? 1 : (f[u] < nu ? -1 : 0);
            if (sign == 0) sign = su;
            else if (su != 0 && su != sign) mixed = true;
            for (int v : g.adj[u])
                if (!in_origin[v] && comp[v] < 0) {
                    comp[v] = ncomp;
                    stack.push_back(v);
                }
        }
        if (mixed) sign = 0;
        r.component_signs.push_back(sign);
        std::sort(members.begin(), members.end());
        for (int u : members)
            if (sign == 0 || f[u] - nu != Rational(sign * dO[u]))
                fail(r.origin, u, "value is not the signed distance to the origin set");
        ++ncomp;
    }
    for (int u = 0; u < n; ++u)
        if (f[u] < E && nu - f[u] != Rational(dO[u]))
            fail(r.origin_below, u, "below-mean value is not the distance to the origin set");
    return r;
}

OddCycleReport odd_cycle_optimality(int n, Grid grid)
{
    OddCycleReport rep;
    MetricSpace s = MetricSpace::from_graph(cycle_graph(n));
    if (n % 2 == 0) {
        rep.vacuous = true;
        auto mv = max_variance(s);
        rep.even_witness = mv.witnesses.empty() ? std::vector<int>{}
                                                : std::vector<int>(mv.witnesses[0].values.data(),
                                                                   mv.witnesses[0].values.data() + n);
        return rep;
    }
    PoolOptions opt;
    opt.keep_members = true;
    FieldPool pool = candidate_pool(s, opt);
    auto t = grid.values();
    auto curve = log_moment_envelope(pool, t);
    auto is_distance_function = [&](const std::vector<int>& f) {
        for (int v = 0; v < n; ++v)
            for (int sign : {1, -1}) {
                bool ok = true;
                for (int u = 0; u < n && ok; ++u) ok = f[u] - f[v] == sign * s.dist(u, v);
                if (ok) return true;
            }
        return false;
    };
    for (std::size_t i = 0; i < t.size(); ++i)
        for (auto w : curve.witness[i])
            for (const auto& f : pool.profiles()[w].all_members) {
                ++rep.witnesses_checked;
                if (!is_distance_function(f) && rep.holds) {
                    rep.holds = false;
                    rep.counterexample = f;
                    rep.counterexample_t = t[i];
                }
            }
    return rep;
}

std::vector<int> distance_roots(const IntField& f)
{
    const MetricSpace& s = *f.space;
    std::vector<int> roots;
    for (std::size_t r = 0; r < s.size(); ++r) {
        bool ok = true;
        for (std::size_t u = 0; u < s.size() && ok; ++u) ok = std::abs(f[u] - f[r]) == s.dist(u, r);
        if (ok) roots.push_back(static_cast<int>(r));
    }
    return roots;
}

TreeSearchReport tree_conjecture_search(int trials, int max_n, std::uint64_t seed)
{
    if (max_n < 3 || max_n > 32) throw Error("bad-size", "tree size must lie in [3, 32]");
    TreeSearchReport rep;
    Rng base(seed);
    for (int trial = 0; trial < trials; ++trial) {
        Rng rng = base.split(static_cast<std::uint64_t>(trial));
        int n = 3 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_n - 2)));
        // Random labelled tree from a Pruefer sequence.
        std::vector<int> code(n - 2), degree(n, 1);
        for (int& x : code) {
            x = static_cast<int>(rng.below(n));
            ++degree[x];
        }
        std::vector<std::pair<int, int>> edges;
        for (int x : code) {
            int leaf = 0;
            while (degree[leaf] != 1) ++leaf;
            edges.push_back({std::min(leaf, x), std::max(leaf, x)});
            --degree[leaf];
            --degree[x];
        }
        std::vector<int> last;
        for (int v = 0; v < n; ++v)
            if (degree[v] == 1) last.push_back(v);
        edges.push_back({last[0], last[1]});
        Graph g = build_graph(n, edges);
        MetricSpace s = MetricSpace::from_graph(g);
        bool is_path = std::all_of(g.adj.begin(), g.adj.end(), [](const auto& a) { return a.size() <= 2; });
        auto mv = max_variance(s, EnumOptions{32, 4000000000ULL, false}, 4096);
        bool holds = true, branch = true;
        for (const auto& w : mv.witnesses) {
            auto roots = distance_roots(w);
            if (roots.empty()) {
                holds = false;
                rep.counterexamples.push_back({g.edges, std::vector<int>(w.values.data(), w.values.data() + n)});
                break;
            }
            if (!std::any_of(roots.begin(), roots.end(), [&](int r) { return g.degree(r) >= 3; })) branch = false;
        }
        ++rep.trials;
        rep.holds += holds;
        if (!is_path) {
            ++rep.non_path_trees;
            rep.holds_with_branch_root += holds && branch;
        }
    }
    return rep;
}

}  // namespace lipcurv
