#include "lipcurv/isoperimetry.hpp"

#include "lipcurv/families.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <map>
#include <numeric>
#include <set>

namespace lipcurv {

VertexSet VertexSet::of(const MetricSpace& s, const std::vector<std::size_t>& points)
{
    VertexSet v = empty(s);
    for (auto p : points) {
        if (p >= s.size()) throw Error("bad-index", "point outside the space");
        v.member[p] = 1;
    }
    return v;
}

std::size_t VertexSet::count() const { return static_cast<std::size_t>(std::count(member.begin(), member.end(), 1)); }

std::vector<std::size_t> VertexSet::points() const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < member.size(); ++i)
        if (member[i]) out.push_back(i);
    return out;
}

bool VertexSet::includes(const VertexSet& o) const
{
    for (std::size_t i = 0; i < member.size(); ++i)
        if (o.member[i] && !member[i]) return false;
    return true;
}

std::vector<int> distance_to_set(const VertexSet& s)
{
    auto pts = s.points();
    if (pts.empty()) throw Error("empty", "distance to the empty set");
    const MetricSpace& sp = *s.space;
    if (const Graph* g = sp.graph()) return bfs(*g, std::vector<int>(pts.begin(), pts.end()));
    std::vector<int> d(sp.size(), std::numeric_limits<int>::max());
    for (std::size_t u = 0; u < sp.size(); ++u)
        for (auto p : pts) d[u] = std::min(d[u], sp.dist(u, p));
    return d;
}

VertexSet ball(const VertexSet& s, int d)
{
    if (d < 0) throw Error("bad-radius", "negative radius");
    auto dist = distance_to_set(s);
    VertexSet b = VertexSet::empty(*s.space);
    for (std::size_t u = 0; u < dist.size(); ++u) b.member[u] = dist[u] <= d;
    return b;
}

namespace {

template <class T>
VertexSet level_set_impl(const MetricSpace& power, const std::vector<T>& base, const Rational& r)
{
    VertexSet out = VertexSet::empty(power);
    const bool tensor = !power.factors().empty();
    for (std::size_t a = 0; a < power.size(); ++a) {
        Rational sum = 0;
        if (tensor) {
            for (auto c : power.coordinates(a)) sum += Rational(base.at(c));
        } else {
            sum = Rational(base.at(a));
        }
        out.member[a] = sum <= r;
    }
    return out;
}

std::vector<Rational> sums_of(const MetricSpace& power, const std::vector<int>& base)
{
    std::set<Rational> s;
    const bool tensor = !power.factors().empty();
    for (std::size_t a = 0; a < power.size(); ++a) {
        long sum = 0;
        if (tensor) {
            for (auto c : power.coordinates(a)) sum += base[c];
        } else {
            sum = base[a];
        }
        s.insert(Rational(sum));
    }
    return {s.begin(), s.end()};
}

MetricSpace power_of(const MetricSpace& base, int n)
{
    if (n < 1) throw Error("bad-power", "power must be at least 1");
    if (n == 1) return base;
    return product(std::vector<MetricSpace>(n, base), ProductMetric::l1);
}

Rational median_of(std::vector<int> v)
{
    std::sort(v.begin(), v.end());
    std::size_t m = v.size();
    if (m % 2) return v[m / 2];
    return Rational(v[m / 2 - 1] + v[m / 2], 2);
}

// True when g equals s*X after permuting equal-length hairs and, for
// interchangeable leaves, as multisets.
bool matches_up_to_symmetry(const std::vector<int>& g, const std::vector<int>& X,
                            const std::vector<std::vector<int>>& hairs, const std::vector<int>& leaves)
{
    std::vector<int> perm(hairs.size());
    std::iota(perm.begin(), perm.end(), 0);
    for (int sign : {1, -1}) {
        auto h = perm;
        do {
            bool ok = true;
            for (std::size_t a = 0; a < hairs.size() && ok; ++a) {
                const auto& src = hairs[a];
                const auto& dst = hairs[h[a]];
                if (src.size() != dst.size()) ok = false;
                for (std::size_t i = 0; i < src.size() && ok; ++i) ok = sign * g[dst[i]] == X[src[i]];
            }
            if (ok && !leaves.empty()) {
                std::vector<int> a, b;
                for (int w : leaves) {
                    a.push_back(sign * g[w]);
                    b.push_back(X[w]);
                }
                std::sort(a.begin(), a.end());
                std::sort(b.begin(), b.end());
                ok = a == b;
            }
            if (ok && sign * g[0] == X[0]) return true;
        } while (std::next_permutation(h.begin(), h.end()));
    }
    return false;
}

}  // namespace

VertexSet level_set(const MetricSpace& power, const std::vector<Rational>& base_values, const Rational& r)
{
    return level_set_impl(power, base_values, r);
}

VertexSet level_set(const MetricSpace& power, const std::vector<int>& base_values, const Rational& r)
{
    return level_set_impl(power, base_values, r);
}

IsoResult iso_function(const MetricSpace& g, int d)
{
    const std::size_t n = g.size();
    if (n == 0) throw Error("empty", "empty space");
    if (n > 20) throw Error("too-large", "isoperimetric scan limited to 20 points");
    if (d < 0) throw Error("bad-radius", "negative radius");
    std::vector<std::uint32_t> nb(n, 0);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v)
            if (g.dist(u, v) <= d) nb[u] |= std::uint32_t{1} << v;
    const std::size_t m = (n + 1) / 2;
    std::vector<std::size_t> idx(m);
    std::iota(idx.begin(), idx.end(), 0);
    IsoResult best;
    best.value = n + 1;
    // Combinations in lexicographic order; the first minimum is kept.
    while (true) {
        std::uint32_t b = 0;
        for (auto i : idx) b |= nb[i];
        std::size_t size = static_cast<std::size_t>(std::popcount(b));
        if (size < best.value) {
            best.value = size;
            best.witness = VertexSet::of(g, idx);
        }
        std::size_t i = m;
        while (i > 0 && idx[i - 1] == n - m + i - 1) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < m; ++j) idx[j] = idx[j - 1] + 1;
    }
    return best;
}

std::vector<std::size_t> tensor_permutation(const MetricSpace& power, const std::vector<int>& psi)
{
    std::vector<std::size_t> out(power.size());
    if (power.factors().empty()) {
        for (std::size_t a = 0; a < power.size(); ++a) out[a] = static_cast<std::size_t>(psi.at(a));
        return out;
    }
    const std::size_t base = power.factors()[0].size();
    for (std::size_t a = 0; a < power.size(); ++a) {
        std::size_t idx = 0;
        for (auto c : power.coordinates(a)) idx = idx * base + static_cast<std::size_t>(psi.at(c));
        out[a] = idx;
    }
    return out;
}

VertexSet image(const VertexSet& s, const std::vector<std::size_t>& perm)
{
    VertexSet out = VertexSet::empty(*s.space);
    for (std::size_t i = 0; i < s.member.size(); ++i)
        if (s.member[i]) out.member[perm[i]] = 1;
    return out;
}

CaterpillarReport caterpillar_counterexample(int k, int n)
{
    if (k < 2) throw Error("bad-parameter", "caterpillar needs k >= 2");
    CaterpillarReport rep;
    rep.k = k;
    rep.n = n;
    Graph g = caterpillar_graph(k);
    MetricSpace base = MetricSpace::from_graph(g);
    const int V = 4 * k;
    auto u = [](int i) { return i - 1; };
    auto w = [k](int i) { return 2 * k + i - 1; };
    rep.X.assign(V, 0);
    rep.Y.assign(V, 0);
    rep.psi.assign(V, -1);
    for (int i = 1; i <= 2 * k; ++i) {
        rep.X[u(i)] = i;
        rep.X[w(i)] = i <= k ? i - 1 : i + 1;
    }
    for (int v = 0; v < V; ++v)
        if (rep.X[v] <= k) {
            rep.Y[v] = rep.X[v];
            rep.psi[v] = v;
        }
    rep.Y[w(k + 1)] = k + 1;
    for (int j = k + 2; j <= 2 * k; ++j) {
        rep.Y[w(j)] = j;
        rep.Y[u(j - 1)] = j;
    }
    rep.Y[u(2 * k)] = 2 * k + 1;
    rep.psi[u(k + 1)] = w(k + 1);
    for (int j = k + 2; j <= 2 * k; ++j) {
        rep.psi[u(j)] = u(j - 1);
        rep.psi[w(j - 1)] = w(j);
    }
    rep.psi[w(2 * k)] = u(2 * k);
    for (int v = 0; v < V; ++v)
        if (rep.Y[rep.psi[v]] != rep.X[v]) throw Error("internal", "psi does not carry X-levels to Y-levels");

    rep.x_lipschitz = is_lipschitz(make_field(base, rep.X)).ok;
    if (V <= 24) {
        auto mv = max_variance(base, {}, 1);
        rep.x_optimality_checked = true;
        rep.x_variance_optimal = variance(make_field(base, rep.X)) == mv.c2;
    }

    MetricSpace power = power_of(base, n);
    const std::size_t N = power.size();
    auto perm = tensor_permutation(power, rep.psi);
    std::vector<std::size_t> inv(N);
    for (std::size_t a = 0; a < N; ++a) inv[perm[a]] = a;
    rep.median = Rational(n * (2 * k + 1), 2);
    Rational shift_threshold = Rational(k + 2) - Rational(2 * k + 1, 2);

    for (const Rational& r : sums_of(power, rep.X)) {
        VertexSet sx = level_set(power, rep.X, r), sy = level_set(power, rep.Y, r);
        auto dx = distance_to_set(sx), dy = distance_to_set(sy);
        int dmax = std::max(*std::max_element(dx.begin(), dx.end()), *std::max_element(dy.begin(), dy.end()));
        std::size_t cx = sx.count(), cy = sy.count();
        for (int d = 0; d <= dmax + 1; ++d) {
            CaterpillarRow row;
            row.r = r;
            row.d = d;
            row.set_x = cx;
            row.set_y = cy;
            bool contained = true, any_extra = false;
            for (std::size_t a = 0; a < N; ++a) {
                row.ball_x += dx[a] <= d;
                row.ball_y += dy[a] <= d;
                bool in_image = dx[inv[a]] <= d;
                if (dy[a] <= d && !in_image) contained = false;
                if (in_image && dy[a] > d) any_extra = true;
            }
            row.contained = contained;
            row.strict = contained && any_extra;
            row.predicted_strict = d > 0 && r - rep.median >= shift_threshold && row.ball_y < N;
            if (!row.contained) {
                rep.containment_all = false;
                rep.containment_failures.push_back({r, d});
            }
            if (row.strict) rep.strict_rows.push_back({r, d});
            if (row.strict != row.predicted_strict) rep.strict_matches_prediction = false;
            if (row.ball_y > row.ball_x) rep.sizes_dominate = false;
            if (n == 1 && r >= k + 1 && cx < N && d >= 1) {
                std::size_t want_x = std::min<std::size_t>(cx + 2 * d, N);
                std::size_t want_y = std::min<std::size_t>(d <= 2 ? cy + d : cy + 2 * d - 2, N);
                if (row.ball_x != want_x || row.ball_y != want_y) rep.single_copy_sizes = false;
            }
            rep.rows.push_back(row);
        }
    }
    return rep;
}

TripodReport tripod_examples(int k, bool star)
{
    TripodReport rep;
    rep.k = k;
    rep.star = star;
    if (!star) {
        if (k < 2) throw Error("bad-parameter", "tripod needs k >= 2");
        rep.large_k = k >= 6;
        Graph g = tripod_graph(k);
        MetricSpace s = MetricSpace::from_graph(g);
        const int V = 4 * k + 1;
        auto x = [](int i) { return i; };
        auto y = [k](int i) { return k + i; };
        auto z = [k](int i) { return 2 * k + i; };
        rep.X.assign(V, 0);
        rep.psi.assign(V, -1);
        rep.psi[0] = 0;
        for (int i = 1; i <= k; ++i) {
            rep.X[x(i)] = rep.X[y(i)] = -i;
            rep.psi[x(i)] = z(2 * i - 1);
            rep.psi[z(2 * i - 1)] = x(i);
            rep.psi[y(i)] = z(2 * i);
            rep.psi[z(2 * i)] = y(i);
        }
        for (int i = 1; i <= 2 * k; ++i) rep.X[z(i)] = i;
        rep.set_threshold_x = 0;
        rep.set_threshold_neg = 0;
        std::vector<int> negX(rep.X);
        for (int& v : negX) v = -v;
        VertexSet sx = level_set(s, rep.X, 0), sn = level_set(s, negX, 0);
        std::vector<std::size_t> perm(rep.psi.begin(), rep.psi.end());
        rep.set_x = sx.count();
        rep.set_neg = sn.count();
        rep.image_of_set = image(sx, perm) == sn;
        for (int d = 0; d <= diameter(g); ++d) {
            TripodRow row;
            row.d = d;
            VertexSet bx = ball(sx, d), bn = ball(sn, d), im = image(bx, perm);
            row.ball_x = bx.count();
            row.ball_neg = bn.count();
            row.image = im.count();
            row.contained = bn.includes(im);  // psi(B_d(S_{0,X})) inside B_d(S_{0,-X})
            row.strict = row.contained && !(bn == im);
            if (d >= 1 && d <= k) {
                row.predicted_x = 2 * k + 1 + d;
                row.predicted_neg = 2 * k + 1 + 2 * d;
                if (row.ball_x != *row.predicted_x || row.ball_neg != *row.predicted_neg) rep.predicted_sizes_hold = false;
            }
            if (!row.contained) rep.containment_all = false;
            if (row.strict) rep.strict_d.push_back(d);
            rep.rows.push_back(row);
        }
        rep.median = median_of(rep.X);
        rep.mean = mean(make_field(s, rep.X));
        rep.x_lipschitz = is_lipschitz(make_field(s, rep.X)).ok;
        auto mv = max_variance(s, {}, 64);
        rep.c2 = mv.c2;
        rep.variance_x = variance(make_field(s, rep.X));
        rep.x_optimal = rep.variance_x == mv.c2;
        std::vector<std::vector<int>> hairs(3);
        for (int i = 1; i <= k; ++i) {
            hairs[0].push_back(x(i));
            hairs[1].push_back(y(i));
        }
        for (int i = 1; i <= 2 * k; ++i) hairs[2].push_back(z(i));
        rep.witnesses_match = !mv.witnesses.empty();
        for (const auto& wf : mv.witnesses) {
            std::vector<int> v(wf.values.data(), wf.values.data() + V);
            if (!matches_up_to_symmetry(v, rep.X, hairs, {})) rep.witnesses_match = false;
        }
        return rep;
    }

    if (k < 3 || k % 2 == 0) throw Error("bad-parameter", "tripod with star needs odd k >= 3");
    rep.large_k = k >= 7;
    Graph tree = tripod_star_tree(k);
    Graph g = tripod_star_graph(k);
    MetricSpace s = MetricSpace::from_graph(g), st = MetricSpace::from_graph(tree);
    const int V = 4 * k + 1;
    auto x = [](int i) { return i; };
    auto y = [k](int i) { return k + i; };
    auto z = [k](int i) { return 2 * k + i; };
    auto w = [k](int i) { return 3 * k + i; };
    rep.X.assign(V, 0);
    for (int i = 1; i <= k; ++i) {
        rep.X[x(i)] = rep.X[y(i)] = i;
        rep.X[z(i)] = -i;
        rep.X[w(i)] = -1;
    }
    rep.psi.assign(V, -1);
    auto pair = [&](int a, int b) {
        rep.psi[a] = b;
        rep.psi[b] = a;
    };
    rep.psi[0] = 0;
    for (int i = 0; k - i >= (k + 1) / 2; ++i) pair(x(k - i), z(k - 2 * i));
    for (int i = 0; k - i >= (k + 3) / 2; ++i) pair(y(k - i), z(k - 2 * i - 1));
    pair(y((k + 1) / 2), w(1));
    pair(x((k - 1) / 2), w(2));
    pair(y((k - 1) / 2), w(3));
    for (int i = 1; i <= (k - 3) / 2; ++i) {
        pair(x(i), w(3 + i));
        pair(y(i), w((k + 3) / 2 + i));
    }
    if (std::count(rep.psi.begin(), rep.psi.end(), -1) != 0) throw Error("internal", "psi is not a permutation");

    std::vector<int> negX(rep.X);
    for (int& v : negX) v = -v;
    rep.set_threshold_x = -2;
    rep.set_threshold_neg = Rational(-(k + 3), 2);
    VertexSet sx = level_set(s, rep.X, rep.set_threshold_x), sn = level_set(s, negX, rep.set_threshold_neg);
    std::vector<std::size_t> perm(rep.psi.begin(), rep.psi.end());
    rep.set_x = sx.count();
    rep.set_neg = sn.count();
    rep.image_of_set = image(sx, perm) == sn;
    const std::size_t N = static_cast<std::size_t>(V);
    for (int d = 0; d <= diameter(g) + 1; ++d) {
        TripodRow row;
        row.d = d;
        VertexSet bx = ball(sx, d), bn = ball(sn, d), im = image(bx, perm);
        row.ball_x = bx.count();
        row.ball_neg = bn.count();
        row.image = im.count();
        row.contained = im.includes(bn);  // psi(B_d(S_{-2,X})) contains B_d(S_{-(k+3)/2,-X})
        row.strict = row.contained && !(bn == im);
        std::size_t S = static_cast<std::size_t>(k - 1);
        if (d == 1) row.predicted_x = S + 2;
        else if (d == 2) row.predicted_x = S + 4;
        else if (d >= 3 && d - 2 <= k) row.predicted_x = N - 2 * static_cast<std::size_t>(k - d + 3);
        if (2 * d < k + 3) row.predicted_neg = S + 2 * static_cast<std::size_t>(d);
        else if (2 * d == k + 3) row.predicted_neg = S + 2 * static_cast<std::size_t>(d - 1) + 1;
        else if (d - (k + 1) / 2 <= k) row.predicted_neg = N - static_cast<std::size_t>(k - (d - (k + 1) / 2) + 1);
        if ((row.predicted_x && *row.predicted_x != row.ball_x) || (row.predicted_neg && *row.predicted_neg != row.ball_neg))
            rep.predicted_sizes_hold = false;
        if (!row.contained) rep.containment_all = false;
        if (row.strict) rep.strict_d.push_back(d);
        rep.rows.push_back(row);
    }
    rep.median = median_of(rep.X);
    rep.mean = mean(make_field(s, rep.X));
    rep.x_lipschitz = is_lipschitz(make_field(s, rep.X)).ok;
    EnumOptions opt;
    opt.reduce_twins = true;
    auto mv = max_variance(st, opt, 64);
    rep.c2 = mv.c2;
    rep.variance_x = variance(make_field(st, rep.X));
    rep.x_optimal = rep.variance_x == mv.c2 && rep.x_lipschitz;
    std::vector<std::vector<int>> hairs(3);
    std::vector<int> leaves;
    for (int i = 1; i <= k; ++i) {
        hairs[0].push_back(x(i));
        hairs[1].push_back(y(i));
        hairs[2].push_back(z(i));
        leaves.push_back(w(i));
    }
    rep.witnesses_match = !mv.witnesses.empty();
    for (const auto& wf : mv.witnesses) {
        std::vector<int> v(wf.values.data(), wf.values.data() + V);
        if (!matches_up_to_symmetry(v, rep.X, hairs, leaves)) rep.witnesses_match = false;
    }
    return rep;
}

}  // namespace lipcurv
