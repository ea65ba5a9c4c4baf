#include "lipcurv/hypercube.hpp"

#include "lipcurv/families.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <set>

namespace lipcurv {

namespace {

int floor_mul(const Rational& rho, int d)
{
    Rational x = rho * d;
    BigInt q = numerator(x) / denominator(x);
    if (x < 0 && Rational(q) != x) q -= 1;
    return q.convert_to<int>();
}

int ceil_mul(const Rational& rho, int d)
{
    int f = floor_mul(rho, d);
    return Rational(f) == rho * d ? f : f + 1;
}

void check_rho(const Rational& rho)
{
    if (rho <= 0 || rho >= 1) throw Error("bad-rho", "rho must lie in (0,1)");
}

// Coordinates on a cube (bits) or an l0 product (factor indices).
struct Coords {
    const MetricSpace* s = nullptr;
    std::vector<std::size_t> sizes, strides;

    explicit Coords(const MetricSpace& sp) : s(&sp)
    {
        if (sp.is_cube()) {
            sizes.assign(sp.cube_dim(), 2);
            for (int j = 0; j < sp.cube_dim(); ++j) strides.push_back(std::size_t{1} << j);
        } else if (!sp.factors().empty() && sp.kind() == MetricKind::hamming) {
            for (const auto& f : sp.factors()) sizes.push_back(f.size());
            strides.assign(sizes.size(), 1);
            for (std::size_t k = sizes.size(); k-- > 1;) strides[k - 1] = strides[k] * sizes[k];
        } else {
            throw Error("bad-space", "needs a hypercube or an l0 product");
        }
    }
    int dim() const { return static_cast<int>(sizes.size()); }
    std::size_t coord(std::size_t i, int j) const { return i / strides[j] % sizes[j]; }
    std::size_t with(std::size_t i, int j, std::size_t value) const
    {
        return i - coord(i, j) * strides[j] + value * strides[j];
    }
};

bool coordinate_space(const MetricSpace& s)
{
    return s.is_cube() || (!s.factors().empty() && s.kind() == MetricKind::hamming);
}

// Calls fn(mask) for every mask below 2^r with popcount k.
template <class Fn>
void for_each_combination(int r, int k, Fn&& fn)
{
    if (k < 0 || k > r) return;
    if (k == 0) {
        fn(std::uint64_t{0});
        return;
    }
    std::uint64_t m = (std::uint64_t{1} << k) - 1, end = std::uint64_t{1} << r;
    while (m < end) {
        fn(m);
        std::uint64_t c = m & -m, n = m + c;
        m = (((n ^ m) >> 2) / c) | n;
    }
}

std::vector<int> differing(const Coords& c, std::size_t a, std::size_t b)
{
    std::vector<int> out;
    for (int j = 0; j < c.dim(); ++j)
        if (c.coord(a, j) != c.coord(b, j)) out.push_back(j);
    return out;
}

// Point agreeing with b on diff[k] for k in mask, with a elsewhere.
std::size_t blend(const Coords& c, std::size_t a, std::size_t b, const std::vector<int>& diff, std::uint64_t mask)
{
    std::size_t u = a;
    for (std::size_t k = 0; k < diff.size(); ++k)
        if (mask >> k & 1) u = c.with(u, diff[k], c.coord(b, diff[k]));
    return u;
}

std::pair<int, int> level_range(const VertexSet& S)
{
    int lo = 1 << 30, hi = -1;
    for (auto p : S.points()) {
        int w = std::popcount(static_cast<std::uint64_t>(p));
        lo = std::min(lo, w);
        hi = std::max(hi, w);
    }
    return {lo, hi};
}

int min_distance(const VertexSet& S, const VertexSet& T)
{
    const MetricSpace& s = *S.space;
    int best = 1 << 30;
    auto sp = S.points(), tp = T.points();
    if (sp.empty() || tp.empty()) throw Error("empty", "empty set");
    for (auto a : sp)
        for (auto b : tp) best = std::min(best, s.dist(a, b));
    return best;
}

}  // namespace

std::string atom_label(const MetricSpace& s, const MidpointAtom& m)
{
    if (!m.is_edge()) return s.label(m.u);
    return s.label(m.u) + "~" + s.label(m.v);
}

std::vector<std::size_t> geodesic_layer(const MetricSpace& s, std::size_t a, std::size_t b, int k)
{
    std::vector<std::size_t> out;
    const int r = s.dist(a, b);
    if (k < 0 || k > r) return out;
    if (coordinate_space(s)) {
        Coords c(s);
        auto diff = differing(c, a, b);
        for_each_combination(r, k, [&](std::uint64_t m) { out.push_back(blend(c, a, b, diff, m)); });
        std::sort(out.begin(), out.end());
        return out;
    }
    for (std::size_t u = 0; u < s.size(); ++u)
        if (s.dist(a, u) == k && s.dist(u, b) == r - k) out.push_back(u);
    return out;
}

std::vector<std::size_t> midpoints_hat(const MetricSpace& s, std::size_t a, std::size_t b, const Rational& rho)
{
    check_rho(rho);
    const int r = s.dist(a, b);
    const int k1 = floor_mul(rho, r), k2 = ceil_mul(1 - rho, r);
    auto out = geodesic_layer(s, a, b, k1);
    if (k2 != k1) {
        auto more = geodesic_layer(s, a, b, k2);
        out.insert(out.end(), more.begin(), more.end());
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
    }
    return out;
}

VertexSet midpoints_hat(const VertexSet& S, const VertexSet& T, const Rational& rho)
{
    VertexSet out = VertexSet::empty(*S.space);
    for (auto a : S.points())
        for (auto b : T.points())
            for (auto u : midpoints_hat(*S.space, a, b, rho)) out.member[u] = 1;
    return out;
}

VertexSet midpoints_directed(const VertexSet& S, const VertexSet& T, const Rational& rho)
{
    check_rho(rho);
    const MetricSpace& s = *S.space;
    VertexSet out = VertexSet::empty(s);
    for (auto a : S.points())
        for (auto b : T.points())
            for (auto u : geodesic_layer(s, a, b, floor_mul(rho, s.dist(a, b)))) out.member[u] = 1;
    return out;
}

bool is_graph_metric(const MetricSpace& s)
{
    return s.kind() == MetricKind::graph || coordinate_space(s);
}

std::vector<MidpointAtom> midpoints_tilde(const MetricSpace& s, std::size_t a, std::size_t b)
{
    const int r = s.dist(a, b);
    std::vector<MidpointAtom> out;
    if (r % 2 == 0) {
        for (auto u : geodesic_layer(s, a, b, r / 2)) out.push_back(MidpointAtom::point(u));
        return out;
    }
    if (!is_graph_metric(s)) throw Error("no-edge-atoms", "odd distance on a space that is not a graph metric");
    const int h = (r - 1) / 2;
    auto near = geodesic_layer(s, a, b, h);
    auto far = geodesic_layer(s, a, b, h + 1);
    if (const Graph* g = s.graph()) {
        std::vector<char> in_far(s.size(), 0);
        for (auto v : far) in_far[v] = 1;
        for (auto u : near)
            for (int v : g->adj[u])
                if (in_far[v]) out.push_back(MidpointAtom::edge(u, v));
    } else {
        for (auto u : near)
            for (auto v : far)
                if (s.dist(u, v) == 1) out.push_back(MidpointAtom::edge(u, v));
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool is_convex(const VertexSet& S)
{
    const MetricSpace& s = *S.space;
    auto pts = S.points();
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            for (auto u : midpoints_hat(s, pts[i], pts[j]))
                if (!S.contains(u)) return false;
    return true;
}

VertexSet convex_closure(const VertexSet& S)
{
    const MetricSpace& s = *S.space;
    if (S.count() == 0) throw Error("empty", "closure of the empty set");
    VertexSet cur = S;
    std::vector<std::size_t> all = S.points(), fresh = all;
    while (!fresh.empty() && all.size() < s.size()) {
        std::set<std::size_t> added;
        for (auto a : fresh)
            for (auto b : all)
                for (auto u : midpoints_hat(s, a, b))
                    if (!cur.contains(u)) added.insert(u);
        fresh.assign(added.begin(), added.end());
        for (auto u : fresh) cur.member[u] = 1;
        all.insert(all.end(), fresh.begin(), fresh.end());
    }
    if (s.is_cube()) {
        auto [lo, hi] = cube_hull(S);
        if (!(cur == interval(s, lo, hi))) throw std::logic_error("cube closure differs from the hull interval");
    }
    return cur;
}

std::pair<std::uint64_t, std::uint64_t> cube_hull(const VertexSet& S)
{
    if (!S.space->is_cube()) throw Error("bad-space", "hull needs a hypercube");
    std::uint64_t lo = ~std::uint64_t{0}, hi = 0;
    for (auto p : S.points()) {
        lo &= p;
        hi |= p;
    }
    return {lo, hi};
}

VertexSet interval(const MetricSpace& cube, std::uint64_t lo, std::uint64_t hi)
{
    VertexSet out = VertexSet::empty(cube);
    std::uint64_t free = hi & ~lo;
    for (std::uint64_t m = free;; m = (m - 1) & free) {
        out.member[lo | m] = 1;
        if (m == 0) break;
    }
    return out;
}

bool is_interval(const VertexSet& S)
{
    if (S.count() == 0) return false;
    auto [lo, hi] = cube_hull(S);
    return S.count() == (std::size_t{1} << std::popcount(hi & ~lo));
}

IteratedMidpointReport iterated_midpoint_counterexample()
{
    IteratedMidpointReport rep;
    MetricSpace h = hypercube(12);
    auto bits = [](std::initializer_list<int> elems) {
        std::uint64_t m = 0;
        for (int e : elems) m |= std::uint64_t{1} << (e - 1);
        return m;
    };
    VertexSet A = interval(h, 0, bits({1, 2, 3, 4}));
    VertexSet B = interval(h, bits({1, 2, 3, 4, 5, 6, 7, 8}), (std::uint64_t{1} << 12) - 1);
    rep.size_a = A.count();
    rep.size_b = B.count();
    rep.a_convex = is_convex(A);
    rep.b_convex = is_convex(B);
    rep.phi = bits({7, 8, 9, 10, 11, 12});
    rep.zeta = bits({1, 2, 3, 4, 8, 9, 10, 11, 12});

    const Rational half(1, 2), quarter(1, 4);
    VertexSet M = midpoints_hat(A, B, half);
    VertexSet Q = midpoints_directed(A, B, quarter);
    VertexSet QH = midpoints_hat(A, B, quarter);
    VertexSet inner = midpoints_hat(A, M, half);
    VertexSet outer = midpoints_hat(M, B, half);
    rep.phi_is_midpoint = M.contains(rep.phi);
    rep.zeta_is_iterated = inner.contains(rep.zeta);
    rep.zeta_in_quarter = Q.contains(rep.zeta);
    rep.zeta_in_hat_quarter = QH.contains(rep.zeta);
    rep.zeta_in_half = M.contains(rep.zeta);
    rep.half_levels = level_range(M);
    rep.quarter_levels = level_range(Q);
    rep.hat_quarter_levels = level_range(QH);
    rep.half_size = M.count();
    rep.quarter_size = Q.count();
    rep.hat_quarter_size = QH.count();
    rep.iterated_size = inner.count();
    rep.outer_size = outer.count();
    rep.outer_contains_hat_quarter = outer.includes(QH);
    rep.inner_strictly_contains = inner.includes(Q) && !(inner == Q);
    VertexSet Q3 = midpoints_directed(A, B, Rational(3, 4));
    rep.outer_strictly_contains = outer.includes(Q3) && !(outer == Q3);
    return rep;
}

CurvatureEstimate bm_curvature(const VertexSet& S, const VertexSet& T, const Rational& rho)
{
    CurvatureEstimate est;
    est.S = S.points();
    est.T = T.points();
    est.d_star = min_distance(S, T);
    est.midpoints = midpoints_hat(S, T, rho).count();
    if (est.d_star > 0) {
        double ratio = static_cast<double>(est.midpoints) /
                       std::sqrt(static_cast<double>(est.S.size()) * static_cast<double>(est.T.size()));
        est.k_hat = 8.0 * std::log(ratio) / (static_cast<double>(est.d_star) * est.d_star);
    }
    return est;
}

int l0_dimension(const MetricSpace& s) { return Coords(s).dim(); }

ScanReport bm_scan(const MetricSpace& s, const ScanOptions& opt)
{
    Coords c(s);
    ScanReport rep;
    rep.dimension = c.dim();
    rep.threshold = 1.0 / (2.0 * rep.dimension);
    rep.min_k_hat = std::numeric_limits<double>::infinity();
    if (opt.max_set == 0) throw Error("bad-parameter", "max_set must be positive");
    Rng root(opt.seed);
    auto perturb = [&](Rng& rng, std::size_t centre, int radius) {
        std::size_t u = centre;
        for (int k = 0; k < radius; ++k) {
            int j = static_cast<int>(rng.below(c.dim()));
            u = c.with(u, j, rng.below(c.sizes[j]));
        }
        return u;
    };
    for (std::size_t i = 0; i < opt.samples; ++i) {
        Rng rng = root.split(i);
        for (;;) {
            VertexSet S = VertexSet::empty(s), T = VertexSet::empty(s);
            std::size_t ns = 1 + rng.below(opt.max_set), nt = 1 + rng.below(opt.max_set);
            if (i % 2 == 0) {
                for (std::size_t k = 0; k < ns; ++k) S.member[rng.below(s.size())] = 1;
                for (std::size_t k = 0; k < nt; ++k) T.member[rng.below(s.size())] = 1;
            } else {
                std::size_t cs = rng.below(s.size()), ct = rng.below(s.size());
                int rs = static_cast<int>(rng.below(3)), rt = static_cast<int>(rng.below(3));
                for (std::size_t k = 0; k < ns; ++k) S.member[perturb(rng, cs, rs)] = 1;
                for (std::size_t k = 0; k < nt; ++k) T.member[perturb(rng, ct, rt)] = 1;
            }
            if (min_distance(S, T) < opt.min_dstar) {
                if (++rep.rejected > opt.max_rejections) throw Error("sampler-stuck", "too many rejections");
                continue;
            }
            auto est = bm_curvature(S, T);
            ++rep.samples;
            if (*est.k_hat < rep.min_k_hat) {
                rep.min_k_hat = *est.k_hat;
                rep.worst = est;
            }
            if (*est.k_hat < rep.threshold) rep.below.push_back(est);
            break;
        }
    }
    return rep;
}

PhiReport phi_injection_check(const VertexSet& S, const VertexSet& T, const Rational& rho, int r)
{
    check_rho(rho);
    const MetricSpace& s = *S.space;
    Coords c(s);
    if (r < 0 || r > c.dim()) throw Error("bad-parameter", "r must lie in [0, d]");
    if (r > 62) throw Error("too-large", "r above 62");
    PhiReport rep;
    rep.r = r;
    VertexSet M = midpoints_hat(S, T, rho);
    std::vector<int> sizes{floor_mul(rho, r)};
    if (ceil_mul(1 - rho, r) != sizes[0]) sizes.push_back(ceil_mul(1 - rho, r));
    std::vector<std::uint64_t> pis;
    for (int k : sizes) for_each_combination(r, k, [&](std::uint64_t m) { pis.push_back(m); });
    rep.classes = pis.size();

    using Pair = std::pair<std::size_t, std::size_t>;
    std::vector<Pair> pairs;
    for (auto a : S.points())
        for (auto b : T.points())
            if (s.dist(a, b) == r) pairs.emplace_back(a, b);
    rep.pairs = pairs.size();

    const std::uint64_t full = (std::uint64_t{1} << r) - 1;
    std::map<Pair, std::size_t> preimages;
    for (auto pi : pis) {
        std::set<Pair> seen;
        const int size = std::popcount(pi);
        for (auto [a, b] : pairs) {
            auto diff = differing(c, a, b);
            std::size_t m1 = blend(c, a, b, diff, full & ~pi);
            std::size_t m2 = blend(c, a, b, diff, pi);
            if (s.dist(a, m2) != size || s.dist(a, m1) != r - size || s.dist(m1, m2) != r) rep.distances_ok = false;
            if (!M.contains(m1) || !M.contains(m2)) rep.in_midpoints = false;
            // phi' applied to the image: the differing coordinates of (m1, m2) are those of (a, b).
            std::size_t back1 = blend(c, m1, m2, diff, full & ~pi);
            std::size_t back2 = blend(c, m1, m2, diff, pi);
            if (back1 != a || back2 != b) rep.inverts = false;
            if (!seen.insert({m1, m2}).second) rep.injective_per_class = false;
            ++preimages[{m1, m2}];
        }
    }
    rep.images = preimages.size();
    for (const auto& [img, n] : preimages) rep.max_preimages = std::max(rep.max_preimages, n);
    return rep;
}

}  // namespace lipcurv
