#include "lipcurv/transport.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <set>

namespace lipcurv {

namespace {

// Comparison helpers: exact for rationals, tolerant for doubles.
bool is_zero(const Rational& x) { return x == 0; }
bool is_negative(const Rational& x) { return x < 0; }
bool is_zero(double x) { return std::abs(x) <= 1e-12; }
bool is_negative(double x) { return x < -1e-9; }

// Transportation simplex on an m x n table.  The basis is a spanning tree
// of the bipartite graph rows + columns.
template <class S>
struct Simplex {
    std::size_t m = 0, n = 0;
    std::vector<S> cost, x, u, v;
    std::vector<char> basic;

    Simplex(const std::vector<S>& a, const std::vector<S>& b, std::vector<S> c) : m(a.size()), n(b.size()), cost(std::move(c))
    {
        x.assign(m * n, S(0));
        basic.assign(m * n, 0);
        std::vector<S> ra = a, rb = b;
        std::size_t i = 0, j = 0;
        for (;;) {
            S q = ra[i] < rb[j] ? ra[i] : rb[j];
            x[i * n + j] = q;
            basic[i * n + j] = 1;
            ra[i] -= q;
            rb[j] -= q;
            if (i == m - 1 && j == n - 1) break;
            if (j == n - 1 || (i < m - 1 && is_zero(ra[i])))
                ++i;
            else
                ++j;
        }
        duals();
    }

    std::vector<std::vector<std::size_t>> tree() const
    {
        std::vector<std::vector<std::size_t>> adj(m + n);
        for (std::size_t c = 0; c < m * n; ++c)
            if (basic[c]) {
                adj[c / n].push_back(c);
                adj[m + c % n].push_back(c);
            }
        return adj;
    }

    void duals()
    {
        u.assign(m, S(0));
        v.assign(n, S(0));
        auto adj = tree();
        std::vector<char> seen(m + n, 0);
        std::deque<std::size_t> q{0};
        seen[0] = 1;
        while (!q.empty()) {
            std::size_t node = q.front();
            q.pop_front();
            for (auto c : adj[node]) {
                std::size_t i = c / n, j = c % n;
                std::size_t other = node < m ? m + j : i;
                if (seen[other]) continue;
                seen[other] = 1;
                if (node < m)
                    v[j] = cost[c] - u[i];
                else
                    u[i] = cost[c] - v[j];
                q.push_back(other);
            }
        }
    }

    S reduced(std::size_t c) const { return cost[c] - u[c / n] - v[c % n]; }

    // Cells of the cycle closed by `enter`, alternating +, -, +, ... from enter.
    std::vector<std::size_t> cycle(std::size_t enter) const
    {
        auto adj = tree();
        std::size_t from = enter / n, to = m + enter % n;
        std::vector<std::size_t> parent_cell(m + n, SIZE_MAX);
        std::vector<char> seen(m + n, 0);
        std::deque<std::size_t> q{from};
        seen[from] = 1;
        while (!q.empty()) {
            std::size_t node = q.front();
            q.pop_front();
            if (node == to) break;
            for (auto c : adj[node]) {
                std::size_t other = node < m ? m + c % n : c / n;
                if (seen[other]) continue;
                seen[other] = 1;
                parent_cell[other] = c;
                q.push_back(other);
            }
        }
        std::vector<std::size_t> out{enter};
        for (std::size_t node = to; node != from;) {
            std::size_t c = parent_cell[node];
            out.push_back(c);
            node = node < m ? m + c % n : c / n;
        }
        return out;
    }

    std::vector<std::size_t> leaving_candidates(const std::vector<std::size_t>& cyc, S& theta) const
    {
        bool first = true;
        for (std::size_t k = 1; k < cyc.size(); k += 2)
            if (first || x[cyc[k]] < theta) {
                theta = x[cyc[k]];
                first = false;
            }
        std::vector<std::size_t> out;
        for (std::size_t k = 1; k < cyc.size(); k += 2)
            if (is_zero(S(x[cyc[k]] - theta))) out.push_back(cyc[k]);
        std::sort(out.begin(), out.end());
        return out;
    }

    void apply(const std::vector<std::size_t>& cyc, const S& theta, std::size_t leave)
    {
        for (std::size_t k = 0; k < cyc.size(); ++k) x[cyc[k]] += k % 2 == 0 ? theta : S(-theta);
        x[leave] = S(0);
        basic[cyc[0]] = 1;
        basic[leave] = 0;
        duals();
    }

    // Bland's rule: first improving cell, smallest leaving index.
    void solve(std::size_t max_iter = 1000000)
    {
        for (std::size_t it = 0; it < max_iter; ++it) {
            std::size_t enter = SIZE_MAX;
            for (std::size_t c = 0; c < m * n && enter == SIZE_MAX; ++c)
                if (!basic[c] && is_negative(reduced(c))) enter = c;
            if (enter == SIZE_MAX) return;
            auto cyc = cycle(enter);
            S theta(0);
            auto leave = leaving_candidates(cyc, theta);
            apply(cyc, theta, leave.front());
        }
        throw Error("simplex-stalled", "iteration cap reached");
    }
};

std::vector<double> as_double(const std::vector<Rational>& v)
{
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = to_double(v[i]);
    return out;
}

template <class S>
std::vector<S> cost_table(const Distribution& a, const Distribution& b, int order)
{
    std::vector<S> c(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) {
            int d = a.space->dist(a.points[i], b.points[j]);
            c[i * b.size() + j] = S(order == 1 ? d : d * d);
        }
    return c;
}

void check_same_space(const Distribution& a, const Distribution& b)
{
    if (!a.space || a.space != b.space) throw Error("mismatched-spaces", "distributions live on different spaces");
    if (a.size() == 0 || b.size() == 0) throw Error("empty", "empty support");
}

bool use_exact(const Distribution& a, const Distribution& b, std::size_t limit)
{
    return a.size() <= limit && b.size() <= limit;
}

// Cells of Z that are positive in some plan supported on Z, given a
// feasible x supported on Z: either x > 0 there, or row and column share a
// strongly connected component of the residual graph.
std::vector<char> face_support(std::size_t m, std::size_t n, const std::vector<char>& Z, const std::vector<char>& positive)
{
    const std::size_t N = m + n;
    std::vector<std::vector<std::size_t>> out(N), in(N);
    auto add = [&](std::size_t a, std::size_t b) {
        out[a].push_back(b);
        in[b].push_back(a);
    };
    for (std::size_t c = 0; c < m * n; ++c) {
        if (Z[c]) add(c / n, m + c % n);
        if (positive[c]) add(m + c % n, c / n);
    }
    // Kosaraju.
    std::vector<char> seen(N, 0);
    std::vector<std::size_t> order;
    for (std::size_t s = 0; s < N; ++s) {
        if (seen[s]) continue;
        std::vector<std::pair<std::size_t, std::size_t>> st{{s, 0}};
        seen[s] = 1;
        while (!st.empty()) {
            auto& [node, k] = st.back();
            if (k < out[node].size()) {
                std::size_t nx = out[node][k++];
                if (!seen[nx]) {
                    seen[nx] = 1;
                    st.push_back({nx, 0});
                }
            } else {
                order.push_back(node);
                st.pop_back();
            }
        }
    }
    std::vector<int> comp(N, -1);
    int nc = 0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        if (comp[*it] >= 0) continue;
        std::vector<std::size_t> st{*it};
        comp[*it] = nc;
        while (!st.empty()) {
            std::size_t node = st.back();
            st.pop_back();
            for (auto p : in[node])
                if (comp[p] < 0) {
                    comp[p] = nc;
                    st.push_back(p);
                }
        }
        ++nc;
    }
    std::vector<char> F(m * n, 0);
    for (std::size_t c = 0; c < m * n; ++c) F[c] = Z[c] && (positive[c] || comp[c / n] == comp[m + c % n]);
    return F;
}

struct UnionFind {
    std::vector<std::size_t> p;
    explicit UnionFind(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    std::size_t find(std::size_t x)
    {
        while (p[x] != x) x = p[x] = p[p[x]];
        return x;
    }
    bool unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        p[a] = b;
        return true;
    }
};

Distribution marginal(const MetricSpace& s, const std::vector<std::size_t>& pts, const std::vector<Rational>& w)
{
    std::vector<std::pair<std::size_t, Rational>> e;
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (w[i] > 0) e.emplace_back(pts[i], w[i]);
    return Distribution::make(s, std::move(e));
}

Rational exact_from_double(double x) { return Rational(x); }

}  // namespace

Distribution Distribution::make(const MetricSpace& s, std::vector<std::pair<std::size_t, Rational>> entries)
{
    std::map<std::size_t, Rational> merged;
    for (auto& [p, w] : entries) {
        if (p >= s.size()) throw Error("bad-index", "point outside the space");
        if (w < 0) throw Error("negative-mass", "negative mass");
        merged[p] += w;
    }
    Distribution d;
    d.space = &s;
    Rational total = 0;
    for (auto& [p, w] : merged)
        if (w > 0) {
            d.points.push_back(p);
            d.mass.push_back(w);
            total += w;
        }
    if (d.points.empty()) throw Error("empty", "distribution with empty support");
    if (std::abs(to_double(total) - 1.0) > 1e-12) throw Error("not-normalized", "masses sum to " + to_string(total));
    if (total != 1)
        for (auto& w : d.mass) w /= total;
    return d;
}

Distribution Distribution::uniform(const MetricSpace& s, const std::vector<std::size_t>& points)
{
    std::vector<std::pair<std::size_t, Rational>> e;
    std::set<std::size_t> uniq(points.begin(), points.end());
    for (auto p : uniq) e.emplace_back(p, Rational(1, static_cast<long>(uniq.size())));
    return make(s, std::move(e));
}

Distribution Distribution::point(const MetricSpace& s, std::size_t p) { return make(s, {{p, Rational(1)}}); }

double AtomDistribution::at(const MidpointAtom& a) const
{
    auto it = std::lower_bound(atoms.begin(), atoms.end(), a);
    return it != atoms.end() && *it == a ? mass[it - atoms.begin()] : 0.0;
}

std::vector<std::pair<std::size_t, std::size_t>> TransportPlan::support(double tol) const
{
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < rows(); ++i)
        for (std::size_t j = 0; j < cols(); ++j) {
            bool pos = is_exact() ? exact[i * cols() + j] > 0 : at(i, j) > tol;
            if (pos) out.emplace_back(i, j);
        }
    return out;
}

namespace {

void finish_costs(TransportPlan& p)
{
    p.w1 = p.w2 = 0;
    for (std::size_t i = 0; i < p.rows(); ++i)
        for (std::size_t j = 0; j < p.cols(); ++j) {
            double d = p.dist(i, j);
            p.w1 += p.at(i, j) * d;
            p.w2 += p.at(i, j) * d * d;
        }
    if (p.is_exact()) {
        Rational w1 = 0, w2 = 0;
        for (std::size_t i = 0; i < p.rows(); ++i)
            for (std::size_t j = 0; j < p.cols(); ++j) {
                int d = p.dist(i, j);
                w1 += p.exact[i * p.cols() + j] * d;
                w2 += p.exact[i * p.cols() + j] * (d * d);
            }
        p.w1 = to_double(w1);
        p.w2 = to_double(w2);
    }
}

}  // namespace

TransportPlan make_plan(const Distribution& a, const Distribution& b, std::vector<Rational> exact)
{
    check_same_space(a, b);
    if (exact.size() != a.size() * b.size()) throw Error("bad-plan", "plan shape");
    TransportPlan p;
    p.source = a;
    p.target = b;
    p.mass = as_double(exact);
    p.exact = std::move(exact);
    finish_costs(p);
    return p;
}

TransportPlan make_plan(const Distribution& a, const Distribution& b, std::vector<double> mass)
{
    check_same_space(a, b);
    if (mass.size() != a.size() * b.size()) throw Error("bad-plan", "plan shape");
    TransportPlan p;
    p.source = a;
    p.target = b;
    p.mass = std::move(mass);
    finish_costs(p);
    return p;
}

bool is_transportation(const TransportPlan& p)
{
    const std::size_t m = p.rows(), n = p.cols();
    if (p.is_exact()) {
        for (const auto& x : p.exact)
            if (x < 0) return false;
        for (std::size_t i = 0; i < m; ++i) {
            Rational s = 0;
            for (std::size_t j = 0; j < n; ++j) s += p.exact[i * n + j];
            if (s != p.source.mass[i]) return false;
        }
        for (std::size_t j = 0; j < n; ++j) {
            Rational s = 0;
            for (std::size_t i = 0; i < m; ++i) s += p.exact[i * n + j];
            if (s != p.target.mass[j]) return false;
        }
        return true;
    }
    for (double x : p.mass)
        if (x < -1e-12) return false;
    for (std::size_t i = 0; i < m; ++i) {
        double s = 0;
        for (std::size_t j = 0; j < n; ++j) s += p.at(i, j);
        if (std::abs(s - to_double(p.source.mass[i])) > 1e-9) return false;
    }
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0;
        for (std::size_t i = 0; i < m; ++i) s += p.at(i, j);
        if (std::abs(s - to_double(p.target.mass[j])) > 1e-9) return false;
    }
    return true;
}

WassersteinResult wasserstein(const Distribution& a, const Distribution& b, int order, std::size_t exact_limit)
{
    check_same_space(a, b);
    if (order != 1 && order != 2) throw Error("bad-order", "order must be 1 or 2");
    WassersteinResult res;
    const std::size_t m = a.size(), n = b.size();
    res.zero_reduced.assign(m * n, 0);
    if (use_exact(a, b, exact_limit)) {
        Simplex<Rational> lp(a.mass, b.mass, cost_table<Rational>(a, b, order));
        lp.solve();
        Rational total = 0;
        for (std::size_t c = 0; c < m * n; ++c) total += lp.x[c] * lp.cost[c];
        res.exact = total;
        res.value = to_double(total);
        res.u = as_double(lp.u);
        res.v = as_double(lp.v);
        for (std::size_t c = 0; c < m * n; ++c) res.zero_reduced[c] = lp.reduced(c) == 0;
        res.plan = make_plan(a, b, lp.x);
    } else {
        Simplex<double> lp(as_double(a.mass), as_double(b.mass), cost_table<double>(a, b, order));
        lp.solve();
        double total = 0;
        for (std::size_t c = 0; c < m * n; ++c) {
            if (lp.x[c] < 0) lp.x[c] = 0;
            total += lp.x[c] * lp.cost[c];
        }
        res.value = total;
        res.u = lp.u;
        res.v = lp.v;
        for (std::size_t c = 0; c < m * n; ++c) res.zero_reduced[c] = std::abs(lp.reduced(c)) <= 1e-9;
        res.plan = make_plan(a, b, lp.x);
    }
    return res;
}

MonotonicityReport is_cyclically_monotone(const TransportPlan& p, std::size_t cap)
{
    MonotonicityReport rep;
    auto sup = p.support();
    const std::size_t N = sup.size();
    if (N < 2) return rep;
    if (cap == 0 || cap > N) cap = N;
    auto sq = [&](std::size_t i, std::size_t j) {
        long long d = p.dist(i, j);
        return d * d;
    };
    // Step k -> l costs d(a_l, b_k)^2 - d(a_k, b_k)^2; a negative closed walk
    // of length <= cap contains a negative simple cycle of length <= cap.
    std::vector<long long> w(N * N);
    for (std::size_t k = 0; k < N; ++k)
        for (std::size_t l = 0; l < N; ++l) w[k * N + l] = sq(sup[l].first, sup[k].second) - sq(sup[k].first, sup[k].second);
    const long long INF = std::numeric_limits<long long>::max() / 4;
    for (std::size_t s = 0; s < N; ++s) {
        // best[len][node], parent pointers for the witness.
        std::vector<std::vector<long long>> best(cap + 1, std::vector<long long>(N, INF));
        std::vector<std::vector<std::size_t>> from(cap + 1, std::vector<std::size_t>(N, SIZE_MAX));
        best[0][s] = 0;
        for (std::size_t len = 1; len <= cap; ++len)
            for (std::size_t k = 0; k < N; ++k) {
                if (best[len - 1][k] >= INF) continue;
                for (std::size_t l = 0; l < N; ++l) {
                    if (l == k) continue;
                    // Only the start may repeat, and only to close the walk.
                    long long v = best[len - 1][k] + w[k * N + l];
                    if (v < best[len][l]) {
                        best[len][l] = v;
                        from[len][l] = k;
                    }
                }
            }
        for (std::size_t len = 2; len <= cap; ++len)
            if (best[len][s] < 0) {
                rep.monotone = false;
                rep.excess = -best[len][s];
                std::vector<std::size_t> walk;
                std::size_t node = s;
                for (std::size_t l = len; l > 0; --l) {
                    walk.push_back(node);
                    node = from[l][node];
                }
                std::reverse(walk.begin(), walk.end());
                for (auto k : walk) rep.cycle.emplace_back(p.source.points[sup[k].first], p.target.points[sup[k].second]);
                return rep;
            }
    }
    return rep;
}

TransportPlan max_entropy_optimal_plan(const Distribution& a, const Distribution& b, const MaxEntropyOptions& opt)
{
    auto w = wasserstein(a, b, 2);
    const std::size_t m = a.size(), n = b.size();
    std::vector<char> positive(m * n);
    for (std::size_t c = 0; c < m * n; ++c)
        positive[c] = w.plan.is_exact() ? w.plan.exact[c] > 0 : w.plan.mass[c] > 1e-12;
    auto F = face_support(m, n, w.zero_reduced, positive);
    std::vector<double> x(m * n, 0.0), ra = as_double(a.mass), cb = as_double(b.mass);
    for (std::size_t c = 0; c < m * n; ++c) x[c] = F[c] ? 1.0 : 0.0;
    double residual = 1;
    std::size_t it = 0;
    for (; it < opt.max_iterations; ++it) {
        for (std::size_t i = 0; i < m; ++i) {
            double s = 0;
            for (std::size_t j = 0; j < n; ++j) s += x[i * n + j];
            for (std::size_t j = 0; j < n; ++j) x[i * n + j] *= ra[i] / s;
        }
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0;
            for (std::size_t i = 0; i < m; ++i) s += x[i * n + j];
            for (std::size_t i = 0; i < m; ++i) x[i * n + j] *= cb[j] / s;
        }
        residual = 0;
        for (std::size_t i = 0; i < m; ++i) {
            double s = 0;
            for (std::size_t j = 0; j < n; ++j) s += x[i * n + j];
            residual = std::max(residual, std::abs(s - ra[i]));
        }
        if (residual < opt.tolerance) {
            // Row residuals leak into the cost through the duals; polish until
            // the cost is well inside the 1e-9 acceptance band.
            double cost = 0;
            for (std::size_t c = 0; c < m * n; ++c)
                if (x[c] > 0) {
                    double d = a.space->dist(a.points[c / n], b.points[c % n]);
                    cost += x[c] * d * d;
                }
            if (std::abs(cost - w.value) <= 1e-10 || residual < 1e-15) break;
        }
    }
    if (residual >= opt.tolerance)
        throw Error("ipf-no-convergence", "marginal residual " + std::to_string(residual));
    auto plan = make_plan(a, b, std::move(x));
    if (std::abs(plan.w2 - w.value) > 1e-9) throw std::logic_error("max-entropy plan left the optimal face");
    return plan;
}

PartitionResult partition(const TransportPlan& p)
{
    PartitionResult res;
    const std::size_t n = p.cols();
    auto sup = p.support();
    res.component.assign(p.rows() * n, -1);
    UnionFind uf(sup.size());
    std::map<MidpointAtom, std::size_t> owner;
    for (std::size_t k = 0; k < sup.size(); ++k)
        for (const auto& atom : midpoints_tilde(*p.source.space, p.source.points[sup[k].first], p.target.points[sup[k].second])) {
            auto [it, fresh] = owner.emplace(atom, k);
            if (!fresh) uf.unite(k, it->second);
        }
    std::map<std::size_t, int> id;
    for (std::size_t k = 0; k < sup.size(); ++k) {
        auto root = uf.find(k);
        auto [it, fresh] = id.emplace(root, static_cast<int>(id.size()));
        res.component[sup[k].first * n + sup[k].second] = it->second;
    }
    res.parts.resize(id.size());
    for (std::size_t k = 0; k < sup.size(); ++k) res.parts[res.component[sup[k].first * n + sup[k].second]].cells.push_back(sup[k]);
    const MetricSpace& s = *p.source.space;
    for (auto& part : res.parts) {
        std::set<int> dists;
        for (auto [i, j] : part.cells) dists.insert(p.dist(i, j));
        part.distances.assign(dists.begin(), dists.end());
        if (dists.size() > 1) res.constant_distances = false;
        // Component marginals and normalized plan on the full row/column index sets.
        std::vector<Rational> row(p.rows(), 0), col(n, 0);
        Rational eta = 0;
        std::vector<Rational> cell(p.rows() * n, 0);
        for (auto [i, j] : part.cells) {
            Rational t = p.is_exact() ? p.exact[i * n + j] : exact_from_double(p.at(i, j));
            cell[i * n + j] = t;
            row[i] += t;
            col[j] += t;
            eta += t;
        }
        part.eta = to_double(eta);
        if (p.is_exact()) part.eta_exact = eta;
        for (auto& r : row) r /= eta;
        for (auto& c : col) c /= eta;
        Distribution A = marginal(s, p.source.points, row), B = marginal(s, p.target.points, col);
        std::vector<Rational> sub(A.size() * B.size(), 0);
        std::vector<double> subd(A.size() * B.size(), 0);
        for (auto [i, j] : part.cells) {
            auto ai = std::lower_bound(A.points.begin(), A.points.end(), p.source.points[i]) - A.points.begin();
            auto bj = std::lower_bound(B.points.begin(), B.points.end(), p.target.points[j]) - B.points.begin();
            sub[ai * B.size() + bj] = cell[i * n + j] / eta;
            subd[ai * B.size() + bj] = p.at(i, j) / part.eta;
        }
        part.plan = p.is_exact() ? make_plan(A, B, std::move(sub)) : make_plan(A, B, std::move(subd));
    }
    return res;
}

LargenessReport everybody_is_large_check(const TransportPlan& p)
{
    auto parts = partition(p);
    if (parts.parts.size() != 1) throw Error("has-partition", "plan splits into " + std::to_string(parts.parts.size()) + " components");
    LargenessReport rep;
    const auto& ds = parts.parts[0].distances;
    rep.D = ds.front();
    rep.constant_distance = ds.size() == 1;
    rep.all_pairs_far = true;
    for (std::size_t i = 0; i < p.rows(); ++i)
        for (std::size_t j = 0; j < p.cols(); ++j)
            if (p.dist(i, j) < rep.D) rep.all_pairs_far = false;
    auto w1 = wasserstein(p.source, p.target, 1), w2 = wasserstein(p.source, p.target, 2);
    rep.w1 = w1.value;
    rep.w2 = w2.value;
    if (w1.exact && w2.exact)
        rep.costs_match = *w1.exact == rep.D && *w2.exact == rep.D * rep.D;
    else
        rep.costs_match = std::abs(rep.w1 - rep.D) < 1e-9 && std::abs(rep.w2 - double(rep.D) * rep.D) < 1e-9;
    return rep;
}

std::vector<double> geodesic_counts(const MetricSpace& s, std::size_t a)
{
    std::vector<double> N(s.size(), 0.0);
    if (s.is_cube() || (!s.factors().empty() && s.kind() == MetricKind::hamming)) {
        // Each geodesic fixes the differing coordinates one at a time.
        for (std::size_t u = 0; u < s.size(); ++u) N[u] = std::tgamma(s.dist(a, u) + 1.0);
        return N;
    }
    if (const Graph* g = s.graph()) {
        auto d = bfs(*g, static_cast<int>(a));
        std::vector<std::size_t> order(s.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](auto x, auto y) { return d[x] < d[y]; });
        N[a] = 1;
        for (auto u : order)
            for (int w : g->adj[u])
                if (d[w] == d[u] + 1) N[w] += N[u];
        return N;
    }
    // No graph: chains of unit steps under the metric itself.
    std::vector<std::size_t> order(s.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto x, auto y) { return s.dist(a, x) < s.dist(a, y); });
    N[a] = 1;
    for (auto u : order)
        for (std::size_t w = 0; w < s.size(); ++w)
            if (s.dist(u, w) == 1 && s.dist(a, w) == s.dist(a, u) + 1) N[w] += N[u];
    return N;
}

AtomDistribution interpolate(const TransportPlan& p, const Rational& t)
{
    if (t < 0 || t > 1) throw Error("bad-t", "t must lie in [0,1]");
    const MetricSpace& s = *p.source.space;
    std::map<MidpointAtom, double> acc;
    std::map<std::size_t, std::vector<double>> counts;
    auto N = [&](std::size_t x) -> const std::vector<double>& {
        auto it = counts.find(x);
        if (it == counts.end()) it = counts.emplace(x, geodesic_counts(s, x)).first;
        return it->second;
    };
    const bool half = t == Rational(1, 2);
    for (auto [i, j] : p.support()) {
        const double w = p.at(i, j);
        const std::size_t a = p.source.points[i], b = p.target.points[j];
        const int d = s.dist(a, b);
        if (d == 0) {
            acc[MidpointAtom::point(a)] += w;
            continue;
        }
        const auto& Na = N(a);
        const auto& Nb = N(b);
        const double total = Na[b];
        auto spread = [&](int k, double share) {
            auto layer = geodesic_layer(s, a, b, k);
            if (total > 0) {
                for (auto u : layer) acc[MidpointAtom::point(u)] += share * Na[u] * Nb[u] / total;
            } else {
                for (auto u : layer) acc[MidpointAtom::point(u)] += share / static_cast<double>(layer.size());
            }
        };
        if (half && d % 2 == 1) {
            auto edges = midpoints_tilde(s, a, b);
            const int h = (d - 1) / 2;
            for (const auto& e : edges) {
                std::size_t near = s.dist(a, e.u) == h ? e.u : e.v, far = near == e.u ? e.v : e.u;
                acc[e] += w * Na[near] * Nb[far] / total;
            }
            continue;
        }
        Rational td = t * d;
        BigInt fl = numerator(td) / denominator(td);
        int lo = fl.convert_to<int>();
        if (Rational(lo) == td) {
            spread(lo, w);
        } else {
            spread(lo, w / 2);
            spread(lo + 1, w / 2);
        }
    }
    AtomDistribution out;
    for (auto& [atom, m] : acc) {
        out.atoms.push_back(atom);
        out.mass.push_back(m);
    }
    return out;
}

double entropy(const std::vector<double>& masses)
{
    double h = 0;
    for (double p : masses)
        if (p > 0) h -= p * std::log(p);
    return h;
}

double entropy(const Distribution& d) { return entropy(as_double(d.mass)); }
double entropy(const AtomDistribution& d) { return entropy(d.mass); }
double entropy(const TransportPlan& p) { return entropy(p.mass); }

double displacement_convexity_slack(const TransportPlan& p, const Rational& t, double K, std::optional<double> w2)
{
    if (t < 0 || t > 1) throw Error("bad-t", "t must lie in [0,1]");
    double W2 = w2 ? *w2 : wasserstein(p.source, p.target, 2).value;
    double tt = to_double(t);
    return entropy(interpolate(p, t)) - (1 - tt) * entropy(p.source) - tt * entropy(p.target) - K / 2 * tt * (1 - tt) * W2;
}

ProductStructureReport product_structure_check(const TransportPlan& p, double tol)
{
    ProductStructureReport rep;
    const MetricSpace& s = *p.source.space;
    std::map<MidpointAtom, std::vector<std::pair<std::size_t, std::size_t>>> by_atom;
    for (auto [i, j] : p.support(tol))
        for (const auto& atom : midpoints_tilde(s, p.source.points[i], p.target.points[j])) by_atom[atom].emplace_back(i, j);
    for (const auto& [atom, cells] : by_atom) {
        if (cells.size() < 2) continue;
        ++rep.shared_atoms;
        std::set<std::size_t> I, J;
        for (auto [i, j] : cells) {
            I.insert(i);
            J.insert(j);
        }
        int t = p.dist(cells[0].first, cells[0].second);
        for (auto i : I)
            for (auto j : J) {
                if (p.at(i, j) <= tol) rep.entries_positive = false;
                if (p.dist(i, j) != t) rep.distances_equal = false;
                auto atoms = midpoints_tilde(s, p.source.points[i], p.target.points[j]);
                if (!std::binary_search(atoms.begin(), atoms.end(), atom)) rep.atoms_shared = false;
            }
        for (auto i : I)
            for (auto i2 : I)
                for (auto j : J)
                    for (auto j2 : J)
                        rep.max_deviation = std::max(rep.max_deviation, std::abs(p.at(i, j) * p.at(i2, j2) - p.at(i, j2) * p.at(i2, j)));
    }
    return rep;
}

VertexEnumeration optimal_vertices(const Distribution& a, const Distribution& b, std::size_t cap, std::size_t step_cap)
{
    check_same_space(a, b);
    if (!use_exact(a, b, 64)) throw Error("too-large", "vertex enumeration needs supports of at most 64 atoms");
    Simplex<Rational> lp(a.mass, b.mass, cost_table<Rational>(a, b, 2));
    lp.solve();
    const std::size_t m = lp.m, n = lp.n, mn = m * n;
    std::vector<char> Z(mn);
    for (std::size_t c = 0; c < mn; ++c) Z[c] = lp.reduced(c) == 0;
    // Face cells by endpoint: row i -> cells (i, j), column j -> cells (i, j).
    std::vector<std::vector<std::size_t>> by_row(m), by_col(n);
    for (std::size_t c = 0; c < mn; ++c)
        if (Z[c]) {
            by_row[c / n].push_back(c);
            by_col[c % n].push_back(c);
        }
    auto acyclic = [&](const std::vector<Rational>& x) {
        UnionFind uf(m + n);
        for (std::size_t c = 0; c < mn; ++c)
            if (x[c] > 0 && !uf.unite(c / n, m + c % n)) return false;
        return true;
    };

    VertexEnumeration res;
    std::set<std::vector<Rational>> seen{lp.x};
    std::deque<std::vector<Rational>> queue{lp.x};
    bool truncated = false;
    std::size_t steps = 0;
    while (!queue.empty() && !truncated) {
        std::vector<Rational> x = std::move(queue.front());
        queue.pop_front();
        res.plans.push_back(make_plan(a, b, x));
        if (res.plans.size() >= cap) {
            truncated = !queue.empty();
            break;
        }
        // Edges of the face leave x along circulations on simple cycles of face
        // cells whose negative cells carry mass.  Walk rows and columns
        // alternately; the k-th cell of a cycle gets sign (-1)^k, starting with
        // either sign.
        std::vector<char> on_path(m + n, 0);
        std::vector<std::size_t> path;
        for (std::size_t r0 = 0; r0 < m && !truncated; ++r0)
            for (int first_sign : {1, -1}) {
                // Iterative DFS: (node, next edge index) frames.
                std::vector<std::pair<std::size_t, std::size_t>> st{{r0, 0}};
                on_path.assign(m + n, 0);
                on_path[r0] = 1;
                path.clear();
                while (!st.empty()) {
                    if (++steps > step_cap) {
                        truncated = true;
                        break;
                    }
                    auto& [node, k] = st.back();
                    const auto& edges = node < m ? by_row[node] : by_col[node - m];
                    if (k >= edges.size()) {
                        on_path[node] = 0;
                        st.pop_back();
                        if (!path.empty()) path.pop_back();
                        continue;
                    }
                    const std::size_t c = edges[k++];
                    const int sign = path.size() % 2 == 0 ? first_sign : -first_sign;
                    if (sign < 0 && x[c] <= 0) continue;
                    const std::size_t other = node < m ? m + c % n : c / n;
                    if (other < r0) continue;  // the smallest row starts the cycle
                    if (other == r0 && path.size() >= 3) {
                        path.push_back(c);
                        Rational theta = -1;
                        for (std::size_t q = 0; q < path.size(); ++q) {
                            int sq = q % 2 == 0 ? first_sign : -first_sign;
                            if (sq < 0 && (theta < 0 || x[path[q]] < theta)) theta = x[path[q]];
                        }
                        std::vector<Rational> y = x;
                        for (std::size_t q = 0; q < path.size(); ++q) {
                            int sq = q % 2 == 0 ? first_sign : -first_sign;
                            if (sq > 0)
                                y[path[q]] += theta;
                            else
                                y[path[q]] -= theta;
                        }
                        path.pop_back();
                        if (acyclic(y) && seen.insert(y).second) queue.push_back(std::move(y));
                        continue;
                    }
                    if (on_path[other]) continue;
                    on_path[other] = 1;
                    path.push_back(c);
                    st.push_back({other, 0});
                }
                if (truncated) break;
            }
    }
    res.complete = !truncated && queue.empty();
    return res;
}

TransportPlan cancel_cycles(const TransportPlan& p)
{
    if (!p.is_exact()) throw Error("needs-exact", "cycle cancellation runs on exact plans");
    const std::size_t m = p.rows(), n = p.cols();
    std::vector<Rational> x = p.exact;
    std::vector<long long> cost(m * n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) cost[i * n + j] = static_cast<long long>(p.dist(i, j)) * p.dist(i, j);
    for (;;) {
        // Grow a forest over the support until a cell closes a cycle.
        UnionFind uf(m + n);
        std::vector<std::vector<std::size_t>> adj(m + n);
        std::vector<std::size_t> cyc;
        for (std::size_t c = 0; c < m * n && cyc.empty(); ++c) {
            if (x[c] <= 0) continue;
            std::size_t r = c / n, col = m + c % n;
            if (uf.unite(r, col)) {
                adj[r].push_back(c);
                adj[col].push_back(c);
                continue;
            }
            // Path col -> r in the forest.
            std::vector<std::size_t> parent(m + n, SIZE_MAX);
            std::vector<char> seen(m + n, 0);
            std::deque<std::size_t> q{col};
            seen[col] = 1;
            while (!q.empty()) {
                std::size_t node = q.front();
                q.pop_front();
                if (node == r) break;
                for (auto e : adj[node]) {
                    std::size_t other = node < m ? m + e % n : e / n;
                    if (seen[other]) continue;
                    seen[other] = 1;
                    parent[other] = e;
                    q.push_back(other);
                }
            }
            cyc.push_back(c);
            for (std::size_t node = r; node != col;) {
                std::size_t e = parent[node];
                cyc.push_back(e);
                node = node < m ? m + e % n : e / n;
            }
        }
        if (cyc.empty()) break;
        // Signs alternate +, -, +, ... around the cycle.
        long long delta = 0;
        for (std::size_t k = 0; k < cyc.size(); ++k) delta += (k % 2 == 0 ? 1 : -1) * cost[cyc[k]];
        int minus_parity = delta > 0 ? 0 : 1;  // the side that loses mass
        Rational eps = -1;
        for (std::size_t k = minus_parity; k < cyc.size(); k += 2)
            if (eps < 0 || x[cyc[k]] < eps) eps = x[cyc[k]];
        for (std::size_t k = 0; k < cyc.size(); ++k) {
            if (static_cast<int>(k % 2) == minus_parity)
                x[cyc[k]] -= eps;
            else
                x[cyc[k]] += eps;
        }
    }
    return make_plan(p.source, p.target, std::move(x));
}

bool support_is_forest(const TransportPlan& p)
{
    const std::size_t m = p.rows();
    UnionFind uf(m + p.cols());
    for (auto [i, j] : p.support())
        if (!uf.unite(i, m + j)) return false;
    return true;
}

bool forest_subset_bound(const TransportPlan& p)
{
    const std::size_t m = p.rows(), n = p.cols();
    auto sup = p.support();
    // The support sizes bound everything when the supports are too large.
    if (m + n > 16) return sup.size() <= 2 * (m + n) - 1;
    for (std::uint32_t rm = 0; rm < (1u << m); ++rm)
        for (std::uint32_t cm = 0; cm < (1u << n); ++cm) {
            if (rm == 0 && cm == 0) continue;
            std::size_t e = 0;
            for (auto [i, j] : sup) e += (rm >> i & 1) && (cm >> j & 1);
            if (e > 2 * static_cast<std::size_t>(std::popcount(rm) + std::popcount(cm)) - 1) return false;
        }
    return true;
}

TransportPlan acyclic_optimal_transport(const Distribution& a, const Distribution& b)
{
    if (!use_exact(a, b, 64)) return wasserstein(a, b, 2).plan;
    // Start inside the optimal face (average of its vertices), then cancel.
    auto verts = optimal_vertices(a, b);
    std::vector<Rational> avg(a.size() * b.size(), 0);
    for (const auto& v : verts.plans)
        for (std::size_t c = 0; c < avg.size(); ++c) avg[c] += v.exact[c];
    for (auto& x : avg) x /= static_cast<long>(verts.plans.size());
    return cancel_cycles(make_plan(a, b, std::move(avg)));
}

}  // namespace lipcurv
