#include "lipcurv/cli.hpp"

#include "lipcurv/concentration.hpp"
#include "lipcurv/convexity.hpp"
#include "lipcurv/families.hpp"
#include "lipcurv/geodesics.hpp"
#include "lipcurv/hypercube.hpp"
#include "lipcurv/isoperimetry.hpp"
#include "lipcurv/lipschitz.hpp"
#include "lipcurv/report.hpp"
#include "lipcurv/suite.hpp"
#include "lipcurv/transport.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace lipcurv {

const std::vector<CommandInfo>& command_table()
{
    static const std::vector<CommandInfo> table{
        {"space", "space <space>", {"build_graph", "shortest_path_metric", "product", "family", "find_hairs"}},
        {"sigma", "sigma <graph> [--tmin --tmax --tpoints] [--curve]",
         {"subgaussian_constant", "log_moment", "log_moment_envelope"}},
        {"cvar", "cvar <graph> [--fields]", {"enumerate_extremal_fields", "variance", "max_variance", "is_lipschitz"}},
        {"structure", "structure <graph> <field.json>", {"structure_checks", "is_lipschitz", "variance", "log_moment"}},
        {"odd-cycle", "odd-cycle --n N [--tpoints]", {"odd_cycle_optimality"}},
        {"tree-search", "tree-search --trials T --max-n N", {"tree_conjecture_search"}},
        {"iso", "iso <graph> --d D", {"iso_function", "ball"}},
        {"level-set", "level-set <space> --field FILE --r R [--power N]", {"level_set"}},
        {"counterexample", "counterexample caterpillar|tripod|iterated-midpoint|negative-curvature ...",
         {"caterpillar_counterexample", "tripod_examples", "iterated_midpoint_counterexample"}},
        {"midpoints", "midpoints <space> --a A --b B [--rho p/q]", {"midpoints_hat", "midpoints_tilde"}},
        {"closure", "closure <space> --set FILE", {"is_convex", "convex_closure"}},
        {"bm-scan", "bm-scan <space> --samples N [--S FILE --T FILE]", {"bm_curvature", "bm_scan"}},
        {"phi-check", "phi-check <space> --S FILE --T FILE --rho p/q --r R", {"phi_injection_check"}},
        {"ot", "ot <space> --muA FILE --muB FILE --order 2 [--max-entropy] [--forest]",
         {"wasserstein", "is_cyclically_monotone", "max_entropy_optimal_plan", "partition",
          "everybody_is_large_check", "interpolate", "entropy", "acyclic_optimal_transport"}},
        {"convexity-check", "convexity-check <space> --muA FILE --muB FILE --t p/q --K x [--flavor f]",
         {"displacement_convexity_slack", "weak_curvature_bounds"}},
        {"strong-convexity", "strong-convexity <graph>", {"strong_convexity_characterization"}},
        {"bounds", "bounds tail|sn|levels|levels-search|linear-far|permutation ...",
         {"tail_bound", "empirical_tail", "permutation_variance", "level_set_bounds", "sn_bounds_report"}},
        {"expander", "expander <graph> --S FILE --T FILE [--pairs N]", {"expander_midpoints"}},
        {"geodesic-law", "geodesic-law <graph> [--variant 1|2] [--mc --c 0.9 --steps N]",
         {"exact_midpoint_law", "mc_teleport_walk", "power_law_graph"}},
        {"suite", "suite paper-examples|invariants|all", {"run", "suite"}},
    };
    return table;
}

namespace {

struct Options {
    std::string out, format = "json";
    std::uint64_t seed = 1;
    int threads = 1;

    std::string space, field, set, S, T, muA, muB, a, b, rho = "1/2", t = "1/2", r_text = "0";
    std::string flavor = "sow", variant = "1", tail_variant = "plain", suite_name, graph;
    double tmin = 1e-3, tmax = 50, sigma2 = 0, h = 0, K = 0, c = 0.9;
    int tpoints = 400, d = 1, k = 4, n = 1, r = 0, R = 3, order = 2, trials = 100, max_n = 8, power = 1;
    int max_k = 10;
    std::size_t samples = 10000, pairs = 1000;
    std::uint64_t steps = 1000000;
    bool curve = false, fields = false, star = false, max_entropy = false, forest = false, mc = false;
    std::vector<int> levels;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("bad-file", "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json read_json(const std::string& path, ExperimentReport& rep)
{
    std::string text = read_file(path);
    rep.input(path, text);
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error("bad-file", path + ": " + e.what());
    }
}

MetricSpace load_space(const std::string& spec, ExperimentReport& rep)
{
    if (spec.size() > 5 && spec.substr(spec.size() - 5) == ".json") rep.input(spec, read_file(spec));
    else rep.input("space", spec);
    return parse_space(spec);
}

const Graph& need_graph(const MetricSpace& s)
{
    if (!s.graph()) throw Error("not-a-graph", s.name() + " is not a graph metric");
    return *s.graph();
}

std::size_t point_of(const MetricSpace& s, const std::string& text)
{
    if (auto p = s.find(text)) return *p;
    if (!text.empty() && text.find_first_not_of("0123456789") == std::string::npos) {
        std::size_t i = std::stoull(text);
        if (i < s.size()) return i;
    }
    throw Error("bad-point", "no point '" + text + "' in " + s.name());
}

std::size_t point_of(const MetricSpace& s, const Json& j)
{
    if (j.is_number_unsigned()) return point_of(s, std::to_string(j.get<std::uint64_t>()));
    if (j.is_string()) return point_of(s, j.get<std::string>());
    throw Error("bad-point", "points are labels or indices, got " + j.dump());
}

Rational rational_of(const Json& j)
{
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number()) return parse_rational(j.dump());
    throw Error("bad-value", "expected a rational, got " + j.dump());
}

Json labels(const MetricSpace& s, const std::vector<std::size_t>& pts)
{
    Json out = Json::array();
    for (auto p : pts) out.push_back(s.label(p));
    return out;
}

Json labels(const VertexSet& v)
{
    return labels(*v.space, v.points());
}

VertexSet read_set(const MetricSpace& s, const std::string& path, ExperimentReport& rep)
{
    Json j = read_json(path, rep);
    if (!j.is_array()) throw Error("bad-file", path + ": a set is a JSON list of labels");
    std::vector<std::size_t> pts;
    for (const auto& e : j) pts.push_back(point_of(s, e));
    return VertexSet::of(s, pts);
}

Distribution read_distribution(const MetricSpace& s, const std::string& path, ExperimentReport& rep)
{
    Json j = read_json(path, rep);
    if (!j.is_object()) throw Error("bad-file", path + ": a distribution is a JSON object {label: mass}");
    std::vector<std::pair<std::size_t, Rational>> e;
    for (const auto& [label, mass] : j.items()) e.emplace_back(point_of(s, label), rational_of(mass));
    return Distribution::make(s, std::move(e));
}

// {"anchor": label, "values": {label: rational}}; every point needs a value.
ExactField read_field(const MetricSpace& s, const std::string& path, ExperimentReport& rep, bool reanchor)
{
    Json j = read_json(path, rep);
    if (!j.is_object() || !j.contains("values")) throw Error("bad-file", path + ": field JSON needs \"values\"");
    std::vector<Rational> v(s.size());
    std::vector<char> seen(s.size(), 0);
    for (const auto& [label, value] : j["values"].items()) {
        std::size_t p = point_of(s, label);
        v[p] = rational_of(value);
        seen[p] = 1;
    }
    for (std::size_t p = 0; p < s.size(); ++p)
        if (!seen[p]) throw Error("bad-file", path + ": no value for " + s.label(p));
    std::size_t anchor = j.contains("anchor") ? point_of(s, j["anchor"]) : 0;
    if (reanchor) {
        Rational base = v[anchor];
        for (auto& x : v) x -= base;
    }
    return make_field(s, v, anchor);
}

template <class Scalar>
Json field_json(const ScalarField<Scalar>& f)
{
    Json out = Json::object();
    for (std::size_t i = 0; i < f.size(); ++i) {
        if constexpr (std::is_same_v<Scalar, Rational>) out[f.space->label(i)] = to_string(f[i]);
        else out[f.space->label(i)] = f[i];
    }
    return out;
}

Json plan_json(const TransportPlan& p)
{
    Json out = Json::array();
    const auto& s = *p.source.space;
    for (auto [i, j] : p.support()) {
        Json cell{{"a", s.label(p.source.points[i])}, {"b", s.label(p.target.points[j])}};
        if (p.is_exact()) cell["mass"] = to_string(p.exact[i * p.cols() + j]);
        else cell["mass"] = p.at(i, j);
        out.push_back(cell);
    }
    return out;
}

double plan_cost(const TransportPlan& p, int order)
{
    double c = 0;
    for (std::size_t i = 0; i < p.rows(); ++i)
        for (std::size_t j = 0; j < p.cols(); ++j) c += p.at(i, j) * std::pow(p.dist(i, j), order);
    return c;
}

Json check_json(const CheckOutcome& c, const MetricSpace& s)
{
    Json w = Json::object();
    if (c.witness) w["point"] = s.label(*c.witness);
    if (!c.detail.empty()) w["detail"] = c.detail;
    return w;
}

void cmd_space(const Options& o, ExperimentReport& rep)
{
    auto s = load_space(o.space, rep);
    static const char* kinds[] = {"graph", "hamming", "explicit"};
    rep.quantity("name", s.name());
    rep.quantity("points", s.size());
    rep.quantity("kind", kinds[static_cast<int>(s.kind())]);
    rep.quantity("diameter", s.diameter());
    if (s.size() <= 4096) {
        std::vector<std::size_t> all(s.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        rep.quantity("labels", labels(s, all));
    }
    if (const Graph* g = s.graph()) {
        rep.quantity("edges", g->edges.size());
        Json hairs = Json::array();
        for (const auto& hair : find_hairs(*g)) {
            Json h = Json::array();
            for (int v : hair) h.push_back(g->label(v));
            hairs.push_back(h);
        }
        rep.quantity("hairs", hairs);
        if (g->n <= 2000) {
            auto m = shortest_path_metric(*g);
            bool same = true;
            for (std::size_t i = 0; i < s.size() && same; ++i)
                for (std::size_t j = 0; j < s.size(); ++j)
                    if (m.dist(i, j) != s.dist(i, j)) {
                        same = false;
                        break;
                    }
            rep.certify("graph-metric", same, "stored distances equal shortest-path distances");
        }
    }
    rep.certify("metric-axioms", satisfies_metric_axioms(s, 1000, 100000, o.seed),
                "zero diagonal, symmetry, positivity off the diagonal and the triangle inequality");
}

void cmd_sigma(const Options& o, ExperimentReport& rep)
{
    auto s = load_space(o.space, rep);
    Grid grid{o.tmin, o.tmax, o.tpoints};
    PoolOptions po;
    po.seed = o.seed;
    auto est = subgaussian_constant(s, grid, po);
    rep.quantity("sigma2", est.sigma2_grid_sup, est.exhaustive ? Tag::estimate : Tag::lower_estimate);
    rep.quantity("c2", to_json(est.c2), est.exhaustive ? Tag::exact : Tag::lower_estimate);
    rep.quantity("t_star", est.t_star, Tag::estimate);
    rep.quantity("exhaustive", est.exhaustive);
    rep.quantity("fields", est.fields);
    rep.quantity("profiles", est.profiles);
    if (est.witness.size() == s.size()) {
        rep.quantity("witness", field_json(est.witness));
        rep.certify("witness-lipschitz", is_lipschitz(est.witness).ok, "the witness field is 1-Lipschitz");
    }
    rep.certify("spread-below-sigma", to_double(est.c2) <= est.sigma2_grid_sup + 1e-12, "c^2 <= sigma^2");
    if (o.curve) {
        auto pool = candidate_pool(s, po);
        auto t = grid.values();
        auto curve = log_moment_envelope(pool, t);
        rep.quantity("envelope", Json{{"t", t}, {"L", curve.value}}, est.exhaustive ? Tag::estimate : Tag::lower_estimate);
        if (est.witness.size() == s.size() && est.t_star > 0)
            rep.quantity("witness_log_moment", log_moment(est.witness, est.t_star), Tag::estimate);
    }
}

void cmd_cvar(const Options& o, ExperimentReport& rep)
{
    auto s = load_space(o.space, rep);
    auto mv = max_variance(s);
    rep.quantity("c2", to_json(mv.c2));
    rep.quantity("fields", mv.fields);
    rep.quantity("witnesses_truncated", mv.witnesses_truncated);
    Json ws = Json::array();
    bool ok = true;
    for (std::size_t i = 0; i < mv.witnesses.size(); ++i) {
        const auto& w = mv.witnesses[i];
        ok = ok && is_lipschitz(w).ok && variance(w) == mv.c2;
        if (i < 16) ws.push_back(field_json(w));
    }
    rep.quantity("witnesses", ws);
    rep.certify("witnesses", ok && !mv.witnesses.empty(), "every witness is 1-Lipschitz with variance c^2");
    if (o.fields) {
        auto all = enumerate_extremal_fields(s);
        Json fs = Json::array();
        for (const auto& f : all) fs.push_back(field_json(f));
        rep.quantity("extremal_fields", fs);
    }
}

void cmd_structure(const Options& o, ExperimentReport& rep)
{
    auto s = load_space(o.space, rep);
    const Graph& g = need_graph(s);
    auto f = read_field(s, o.field, rep, true);
    auto lip = is_lipschitz(f);
    rep.quantity("variance", to_json(variance(f)));
    rep.quantity("log_moment_at_1", log_moment(f, 1.0), Tag::estimate);
    rep.certify("lipschitz", lip.ok, "the field is 1-Lipschitz",
                lip.ok ? Json(nullptr) : Json{{"u", s.label(lip.u)}, {"v", s.label(lip.v)}, {"excess", lip.excess}});
    auto sr = structure_checks(f, g);
    rep.quantity("origin", labels(s, sr.origin_set));
    rep.quantity("component_signs", sr.component_signs);
    rep.certify("unimodal-hairs", sr.unimodal_hairs.pass, "values along every hair are unimodal",
                check_json(sr.unimodal_hairs, s));
    rep.certify("origin", sr.origin.pass, "f - f_O is a signed distance to the origin set on each component",
                check_json(sr.origin, s));
    rep.certify("origin-below", sr.origin_below.pass, "below the mean, f_O - f(u) = d(u, O)",
                check_json(sr.origin_below, s));
    rep.certify("descent", sr.descent.pass, "every non-minimal point has a neighbour one lower",
                check_json(sr.descent, s));
    rep.certify("ascent-below", sr.ascent_below.pass, "a point below the mean has a neighbour one higher",
                check_json(sr.ascent_below, s));
}

void cmd_odd_cycle(const Options& o, ExperimentReport& rep)
{
    auto res = odd_cycle_optimality(o.n, Grid{o.tmin, o.tmax, o.tpoints});
    rep.quantity("witnesses_checked", res.witnesses_checked);
    if (res.vacuous) {
        rep.quantity("even_witness", res.even_witness);
        return;
    }
    Json w = nullptr;
    if (res.counterexample) w = Json{{"field", *res.counterexample}, {"t", res.counterexample_t.value_or(0)}};
    rep.certify("distance-functions", res.holds,
                "every log-moment envelope witness is a translated or reflected distance function", w);
}

void cmd_tree_search(const Options& o, ExperimentReport& rep)
{
    auto res = tree_conjecture_search(o.trials, o.max_n, o.seed);
    rep.quantity("trials", res.trials);
    rep.quantity("holds", res.holds);
    rep.quantity("non_path_trees", res.non_path_trees);
    rep.quantity("holds_with_branch_root", res.holds_with_branch_root);
    Json ce = Json::array();
    for (const auto& [edges, f] : res.counterexamples) ce.push_back(Json{{"edges", edges}, {"field", f}});
    rep.certify("distance-root", res.holds == res.trials,
                "every variance-optimal field on a random tree is a distance function from some root", ce);
}

void cmd_iso(const Options& o, ExperimentReport& rep)
{
    auto s = load_space(o.space, rep);
    auto res = iso_function(s, o.d);
    rep.quantity("value", res.value);
    rep.quantity("argmin", labels(res.witness));
    auto b = ball(res.witness, o.d);
    rep.certify("witness", 2 * res.witness.count() >= s.size() && b.count() == res.value,
                "the argmin holds at least half the points and its d-ball has the reported size");
}

void cmd_level_set(const Options& o, ExperimentReport& rep)
{
    auto base = load_space(o.space, rep);
    auto f = read_field(base, o.field, rep, false);
    std::vector<Rational> values(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) values[i] = f[i];
    MetricSpace power = o.power == 1 ? base : product(std::vector<MetricSpace>(o.power, base), ProductMetric::l1);
    auto set = level_set(power, values, parse_rational(o.r_text));
    rep.quantity("points", power.size());
    rep.quantity("size", set.count());
    if (set.count() <= 4096) rep.quantity("members", labels(set));
}

Json rows_json(const CaterpillarReport& rep)
{
    Json out = Json::array();
    for (const auto& row : rep.rows)
        out.push_back(Json{{"r", to_string(row.r)},
                           {"d", row.d},
                           {"set_x", row.set_x},
                           {"set_y", row.set_y},
                           {"ball_x", row.ball_x},
                           {"ball_y", row.ball_y},
                           {"contained", row.contained},
                           {"strict", row.strict},
                           {"predicted_strict", row.predicted_strict}});
    return out;
}

void cmd_caterpillar(const Options& o, ExperimentReport& rep)
{
    auto res = caterpillar_counterexample(o.k, o.n);
    rep.quantity("X", res.X);
    rep.quantity("Y", res.Y);
    rep.quantity("psi", res.psi);
    rep.quantity("median", to_json(res.median));
    rep.quantity("rows", rows_json(res));
    rep.quantity("sizes_dominate", res.sizes_dominate);
    Json fails = Json::array();
    for (const auto& [q, d] : res.containment_failures) fails.push_back(Json{{"r", to_string(q)}, {"d", d}});
    rep.certify("containment", res.containment_all, "psi^n(B_d(S_{r,X})) contains B_d(S_{r,Y}) for every (d, r)",
                fails);
    Json strict = Json::array();
    for (const auto& [q, d] : res.strict_rows) strict.push_back(Json{{"r", to_string(q)}, {"d", d}});
    rep.certify("strict", res.strict_matches_prediction, "containment is strict exactly when d > 0 and r >= k + 2",
                strict);
    rep.certify("x-lipschitz", res.x_lipschitz, "X is 1-Lipschitz");
    if (res.x_optimality_checked)
        rep.certify("x-variance-optimal", res.x_variance_optimal, "X attains the maximum variance");
}

void cmd_tripod(const Options& o, ExperimentReport& rep)
{
    auto res = tripod_examples(o.k, o.star);
    rep.quantity("X", res.X);
    rep.quantity("psi", res.psi);
    rep.quantity("median", to_json(res.median));
    rep.quantity("mean", to_json(res.mean));
    rep.quantity("c2", to_json(res.c2));
    rep.quantity("variance_x", to_json(res.variance_x));
    rep.quantity("set_x", res.set_x);
    rep.quantity("set_neg", res.set_neg);
    Json rows = Json::array();
    for (const auto& row : res.rows) {
        Json j{{"d", row.d}, {"ball_x", row.ball_x}, {"ball_neg", row.ball_neg}, {"image", row.image},
               {"contained", row.contained}, {"strict", row.strict}};
        if (row.predicted_x) j["predicted_x"] = *row.predicted_x;
        if (row.predicted_neg) j["predicted_neg"] = *row.predicted_neg;
        rows.push_back(j);
    }
    rep.quantity("rows", rows);
    rep.quantity("strict_d", res.strict_d);
    rep.quantity("predicted_sizes_hold", res.predicted_sizes_hold);
    rep.certify("image-of-set", res.image_of_set, "psi maps S_{a,X} onto S_{b,-X}");
    rep.certify("containment", res.containment_all, "psi(B_d(S_{a,X})) is inside B_d(S_{b,-X}) for every d");
    rep.certify("x-lipschitz", res.x_lipschitz, "X is 1-Lipschitz");
    if (res.large_k) {
        rep.certify("x-optimal", res.x_optimal, "X attains the maximum variance");
        rep.certify("witnesses", res.witnesses_match, "every optimal field is X or -X up to hair symmetry");
    }
}

void cmd_iterated(const Options&, ExperimentReport& rep)
{
    auto res = iterated_midpoint_counterexample();
    rep.quantity("phi", subset_label(res.phi));
    rep.quantity("zeta", subset_label(res.zeta));
    rep.quantity("half_levels", Json{res.half_levels.first, res.half_levels.second});
    rep.quantity("quarter_levels", Json{res.quarter_levels.first, res.quarter_levels.second});
    rep.quantity("hat_quarter_levels", Json{res.hat_quarter_levels.first, res.hat_quarter_levels.second});
    rep.quantity("sizes", Json{{"half", res.half_size}, {"quarter", res.quarter_size},
                               {"hat_quarter", res.hat_quarter_size}, {"iterated", res.iterated_size},
                               {"outer", res.outer_size}});
    rep.quantity("zeta_in_hat_quarter", res.zeta_in_hat_quarter);
    rep.quantity("outer_contains_hat_quarter", res.outer_contains_hat_quarter);
    rep.certify("convex-inputs", res.a_convex && res.b_convex, "A and B are convex");
    rep.certify("zeta-iterated", res.phi_is_midpoint && res.zeta_is_iterated, "zeta lies in m^(A, m^(A, B))");
    rep.certify("zeta-not-quarter", !res.zeta_in_quarter, "zeta is outside m_{1/4}(A, B)");
    rep.certify("inner-strict", res.inner_strictly_contains, "m^(A, m^(A, B)) strictly contains m_{1/4}(A, B)");
    rep.certify("outer-strict", res.outer_strictly_contains, "m^(m^(A, B), B) strictly contains m_{3/4}(A, B)");
}

void cmd_negative(const Options& o, ExperimentReport& rep)
{
    auto res = negative_curvature_example(o.k);
    rep.quantity("w2", to_json(res.w2));
    rep.quantity("diag_mu_empty", res.diag_mu_empty);
    rep.quantity("diag_entropy", res.diag_entropy);
    rep.quantity("diag_slack", res.diag_slack);
    rep.quantity("marginal_entropy", res.marginal_entropy);
    rep.quantity("maxent_deviation", res.maxent_deviation);
    rep.quantity("maxent_entropy", res.maxent_entropy);
    rep.quantity("maxent_slack", res.maxent_slack);
    rep.quantity("weak_bound", res.weak_bound, Tag::bound);
    rep.quantity("forest_support", res.forest_support);
    rep.quantity("forest_cost", to_json(res.forest_cost));
    rep.certify("maxent-weak-bound", res.maxent_entropy >= res.weak_bound - 1e-12,
                "the max-entropy plan satisfies the weak curvature bound");
    rep.certify("maxent-nonnegative", res.maxent_slack >= -1e-12,
                "the max-entropy plan has nonnegative slack at t = 1/2, K = 0");
}

void cmd_midpoints(const Options& o, ExperimentReport& rep)
{
    auto s = load_space(o.space, rep);
    std::size_t a = point_of(s, o.a), b = point_of(s, o.b);
    Rational rho = parse_rational(o.rho);
    if (rho <= 0 || rho >= 1) throw Error("bad-rho", "rho must lie in (0, 1)");
    auto m = midpoints_hat(s, a, b, rho);
    const int dab = s.dist(a, b);
    rep.quantity("distance", dab);
    rep.quantity("midpoints", labels(s, m));
    rep.quantity("count", m.size());
    bool on = !m.empty();
    for (auto p : m) on = on && s.dist(a, p) + s.dist(p, b) == dab;
    rep.certify("on-geodesic", on, "every midpoint lies on a geodesic from a to b");
    if (dab % 2 == 1 && is_graph_metric(s)) {
        Json atoms = Json::array();
        for (const auto& at : midpoints_tilde(s, a, b)) atoms.push_back(atom_label(s, at));
        rep.quantity("tilde", atoms);
    }
}

void cmd_closure(const Options& o, ExperimentReport& rep)
{
    auto s = load_space(o.space, rep);
    auto S = read_set(s, o.set, rep);
    auto C = convex_closure(S);
    rep.quantity("convex", is_convex(S));
    rep.quantity("closure", labels(C));
    rep.quantity("closure_size", C.count());
    bool ok = is_convex(C) && C.includes(S);
    if (s.is_cube()) {
        auto [lo, hi] = cube_hull(S);
        rep.quantity("interval", Json{subset_label(lo), subset_label(hi)});
        ok = ok && is_interval(C) && C == interval(s, lo, hi);
    }
    rep.certify("closure", ok, "the closure is convex, contains S, and is the spanning interval on cubes");
}

void cmd_bm_scan(const Options& o, ExperimentReport& rep)
{
    auto s = load_space(o.space, rep);
    if (!o.S.empty() || !o.T.empty()) {
        auto S = read_set(s, o.S, rep), T = read_set(s, o.T, rep);
        auto est = bm_curvature(S, T, parse_rational(o.rho));
        rep.quantity("d_star", est.d_star);
        rep.quantity("midpoints", est.midpoints);
        rep.quantity("k_hat", est.k_hat ? Json(*est.k_hat) : Json(nullptr));
        return;
    }
    ScanOptions opt;
    opt.samples = o.samples;
    opt.seed = o.seed;
    auto res = bm_scan(s, opt);
    rep.quantity("dimension", res.dimension);
    rep.quantity("threshold", res.threshold);
    rep.quantity("samples", res.samples);
    rep.quantity("rejected", res.rejected);
    rep.quantity("min_k_hat", res.min_k_hat, Tag::sampled);
    if (res.worst) rep.quantity("worst", Json{{"S", labels(s, res.worst->S)}, {"T", labels(s, res.worst->T)}});
    Json w = nullptr;
    if (!res.below.empty()) w = Json{{"S", labels(s, res.below[0].S)}, {"T", labels(s, res.below[0].T)}};
    rep.certify("curvature", res.below.empty(), "K_hat >= 1/(2d) on every sample with d_* >= 2", w);
}

void cmd_phi(const Options& o, ExperimentReport& rep)
{
    auto s = load_space(o.space, rep);
    auto S = read_set(s, o.S, rep), T = read_set(s, o.T, rep);
    auto res = phi_injection_check(S, T, parse_rational(o.rho), o.R);
    rep.quantity("pairs", res.pairs);
    rep.quantity("classes", res.classes);
    rep.quantity("images", res.images);
    rep.quantity("max_preimages", res.max_preimages);
    rep.certify("distances", res.distances_ok, "d(s, m2) = |pi|, d(s, m1) = r - |pi|, d(m1, m2) = r");
    rep.certify("midpoints", res.in_midpoints, "both images lie in m^_rho(S, T)");
    rep.certify("inverse", res.inverts, "the inverse map recovers (s, t)");
    rep.certify("injective", res.injective_per_class, "phi is injective for each fixed pi");
}

void cmd_ot(const Options& o, ExperimentReport& rep)
{
    auto s = load_space(o.space, rep);
    auto A = read_distribution(s, o.muA, rep), B = read_distribution(s, o.muB, rep);
    if (o.order != 1 && o.order != 2) throw Error("bad-order", "order must be 1 or 2");
    auto w = wasserstein(A, B, o.order);
    rep.quantity("W", w.exact ? to_json(*w.exact) : Json(w.value));
    rep.quantity("plan", plan_json(w.plan));
    auto mono = is_cyclically_monotone(w.plan, 0);
    rep.certify("optimal-monotone", mono.monotone, "the optimal plan is cyclically monotone");
    rep.certify("transportation", is_transportation(w.plan), "the plan has the given marginals");
    auto part = partition(w.plan);
    rep.quantity("components", part.parts.size());
    rep.quantity("constant_distances", part.constant_distances);
    if (part.parts.size() == 1) {
        auto large = everybody_is_large_check(w.plan);
        rep.quantity("everybody_is_large", Json{{"D", large.D}, {"constant_distance", large.constant_distance},
                                                {"all_pairs_far", large.all_pairs_far},
                                                {"costs_match", large.costs_match}});
    }
    auto mid = interpolate(w.plan, Rational(1, 2));
    rep.quantity("entropy", Json{{"A", entropy(A)}, {"B", entropy(B)}, {"plan", entropy(w.plan)}, {"mid", entropy(mid)}});
    if (o.max_entropy) {
        auto me = max_entropy_optimal_plan(A, B);
        rep.quantity("max_entropy_plan", plan_json(me));
        rep.quantity("max_entropy_mid_entropy", entropy(interpolate(me, Rational(1, 2))));
        double cost = plan_cost(me, o.order);
        rep.certify("max-entropy-optimal", is_transportation(me) && std::abs(cost - w.value) <= 1e-8,
                    "the max-entropy plan is a transportation plan with the optimal cost");
    }
    if (o.forest) {
        auto f = acyclic_optimal_transport(A, B);
        rep.quantity("forest_plan", plan_json(f));
        rep.certify("forest", support_is_forest(f) && std::abs(plan_cost(f, o.order) - w.value) <= 1e-9,
                    "forest transport has forest support and the optimal cost");
    }
}

void cmd_convexity(const Options& o, ExperimentReport& rep)
{
    auto s = load_space(o.space, rep);
    auto A = read_distribution(s, o.muA, rep), B = read_distribution(s, o.muB, rep);
    Rational t = parse_rational(o.t);
    if (t < 0 || t > 1) throw Error("bad-t", "t must lie in [0, 1]");
    auto flavor = parse_flavor(o.flavor);
    auto chk = convexity_check(A, B, t, o.K, flavor);
    rep.quantity("flavor", flavor_name(flavor));
    rep.quantity("slack", chk.slack);
    rep.quantity("plans", chk.plans);
    rep.quantity("complete", chk.complete);
    if (chk.witness) {
        rep.quantity("witness_plan", plan_json(*chk.witness));
        rep.quantity("witness_slack", displacement_convexity_slack(*chk.witness, t, o.K));
    }
    rep.certify("displacement-convexity", chk.holds, "H(mu_t) >= (1-t) H(mu_A) + t H(mu_B) + (K/2) t (1-t) W2");
    if (s.is_cube()) {
        auto wk = weak_curvature_bounds(A, B);
        rep.quantity("weak_bound", wk.weak_bound, Tag::bound);
        rep.quantity("almost_slack", wk.almost_slack);
        rep.certify("weak-curvature", wk.weak_holds, "S(mu_C) >= (S_A + S_B + 2 ln|C_R|) / 3 in every component");
        rep.certify("almost-curved", wk.almost_holds, "S_C - S_A/3 - S_B/3 - 2 W2^2 / (5 d^3) + 2/3 >= 0");
    }
}

void cmd_strong(const Options& o, ExperimentReport& rep)
{
    auto s = load_space(o.space, rep);
    auto res = strong_convexity_characterization(need_graph(s));
    rep.quantity("family", res.family);
    rep.quantity("recognized", res.recognized);
    rep.quantity("obstruction_free", res.obstruction_free);
    if (res.witness) {
        const auto& w = *res.witness;
        rep.quantity("witness", Json{{"v", w.v}, {"source", w.source}, {"target", w.target}, {"plan", w.plan},
                                     {"verified", w.verified}, {"slack", w.slack}});
    }
    rep.certify("recognizer-agrees", res.agree, "family recognizer and local-obstruction test agree");
}

void cmd_bounds_tail(const Options& o, ExperimentReport& rep)
{
    auto variant = parse_tail_variant(o.tail_variant);
    double bound = tail_bound(o.sigma2, o.h, variant);
    rep.quantity("bound", bound, Tag::bound);
    if (o.graph.empty()) return;
    auto s = load_space(o.graph, rep);
    Rational h = parse_rational(std::to_string(o.h));
    Rational worst = 0;
    std::size_t violations = 0;
    auto fields = enumerate_extremal_fields(s);
    for (const auto& f : fields) {
        Rational p = variant == TailVariant::plain ? empirical_tail(f, h) : empirical_median_tail(f, h);
        worst = std::max(worst, p);
        violations += tail_check(f, o.sigma2).violations;
    }
    rep.quantity("extremal_fields", fields.size());
    rep.quantity("max_empirical_tail", to_json(worst));
    rep.certify("tail", to_double(worst) <= bound + 1e-12, "the empirical tail of every extremal field is below the bound");
    rep.certify("tail-grid", violations == 0, "both tails hold on the h grid for every extremal field",
                Json{{"violations", violations}});
}

void cmd_bounds_sn(const Options& o, ExperimentReport& rep)
{
    auto res = sn_bounds_report(o.n);
    rep.quantity("sigma2", res.sigma2, res.exhaustive ? Tag::estimate : Tag::lower_estimate);
    rep.quantity("variance_lower", to_json(res.variance_lower));
    rep.quantity("j_n", res.j_n);
    if (o.n >= 3) rep.certify("above-quarter-n", res.above_quarter_n, "sigma^2(S_n) > n/4");
    rep.certify("below-n-minus-1", res.below_n_minus_1, "sigma^2(S_n) <= n - 1");
    if (o.n >= 3) rep.certify("above-j-n", res.above_j_n, "n/4 > sigma^2(K_n x ... x K_2) + 1/4");
}

void cmd_bounds_permutation(const Options& o, ExperimentReport& rep)
{
    auto res = permutation_variance(o.n);
    rep.quantity("exact", to_json(res.exact));
    rep.quantity("formula", to_json(res.formula));
    rep.quantity("corrected", to_json(res.corrected));
    rep.certify("closed-form", res.matches, "the exhaustive variance equals the closed form",
                Json{{"exact", to_string(res.exact)}, {"formula", to_string(res.formula)}});
}

void cmd_bounds_levels(const Options& o, ExperimentReport& rep)
{
    auto res = level_set_sigma(o.n, o.r);
    rep.quantity("sigma2", res.sigma2, res.exhaustive ? Tag::estimate : Tag::lower_estimate);
    rep.quantity("bound", res.bound, Tag::bound);
    rep.certify("different-level-sets", res.below, "grid sigma^2 <= n - 1 + r^2/4");
}

void cmd_bounds_levels_search(const Options& o, ExperimentReport& rep)
{
    auto res = levels_adversarial_search(o.max_k);
    Json rows = Json::array();
    for (const auto& row : res.rows)
        rows.push_back(Json{{"k", row.k}, {"r", row.r}, {"t", row.t}, {"space", row.space}, {"bound", row.bound},
                            {"best_a", row.best_a}, {"exhaustive", row.exhaustive}, {"violated", row.violated}});
    rep.quantity("rows", rows);
    rep.certify("concentration-on-levels", res.violations == 0, "no (A, B) beats the levels bound",
                Json{{"violations", res.violations}});
}

void cmd_bounds_linear_far(const Options& o, ExperimentReport& rep)
{
    auto res = linear_far_check(o.n, o.c, o.R, o.levels, o.trials, o.seed);
    rep.quantity("domain_ok", res.domain_ok);
    if (!res.domain_ok) {
        rep.certify("domain", false, "the parameters satisfy the hypotheses", res.violated);
        return;
    }
    rep.quantity("exponent_constant", res.exponent_constant);
    rep.quantity("checks", res.checks);
    rep.quantity("worst_margin", res.worst_margin, Tag::sampled);
    rep.certify("linear-far", res.violations == 0, "the tail of d(., A) is below the bound for every sampled A",
                Json{{"violations", res.violations}});
}

std::vector<int> int_points(const VertexSet& v)
{
    std::vector<int> out;
    for (auto p : v.points()) out.push_back(static_cast<int>(p));
    return out;
}

void cmd_expander(const Options& o, ExperimentReport& rep)
{
    auto s = load_space(o.space, rep);
    const Graph& g = need_graph(s);
    auto S = read_set(s, o.S, rep), T = read_set(s, o.T, rep);
    auto res = expander_midpoints(g, int_points(S), int_points(T));
    rep.quantity("degree", res.degree);
    rep.quantity("lambda2", res.lambda2);
    rep.quantity("lambda_abs", res.lambda_abs);
    rep.quantity("d_star", res.d_star);
    rep.quantity("degenerate", res.degenerate);
    rep.quantity("s_prime", res.s_prime);
    rep.quantity("t_prime", res.t_prime);
    rep.quantity("edges", res.edges);
    rep.quantity("midpoints", res.midpoints);
    rep.quantity("edge_bound", res.edge_bound, Tag::bound);
    if (g.n <= 64) rep.quantity("spectrum", normalized_spectrum(g));
    if (!res.degenerate)
        rep.certify("mixing", res.mixing_holds, "the mixing lemma holds for (S', T') with lambda_abs");
    auto mix = mixing_lemma_check(g, o.pairs, o.seed);
    rep.quantity("mixing_worst_ratio", mix.worst_ratio, Tag::sampled);
    rep.certify("mixing-random", mix.violations == 0, "the mixing lemma holds on random set pairs",
                Json{{"pairs", mix.pairs}, {"violations", mix.violations}});
}

void cmd_geodesic(const Options& o, ExperimentReport& rep)
{
    auto s = load_space(o.space, rep);
    const Graph& g = need_graph(s);
    auto variant = parse_weight_variant(o.variant);
    auto law = exact_midpoint_law(g, variant);
    Json l = Json::object();
    for (int v = 0; v < g.n; ++v) l[g.label(v)] = to_string(law.law[v]);
    rep.quantity("law", l);
    Json un = Json::array();
    for (int v : law.unattained) un.push_back(g.label(v));
    rep.quantity("unattained", un);
    rep.quantity("ratio_spread", law.ratio_spread);
    rep.quantity("excluded_mass", to_json(law.excluded_mass));
    rep.quantity("even_geodesics", law.even_geodesics.str());
    rep.quantity("odd_geodesics", law.odd_geodesics.str());
    rep.certify("degree-proportional", law.proportional && !law.no_even_geodesics,
                "the midpoint law is proportional to degree on the attaining vertices",
                law.no_even_geodesics ? Json("no even geodesics") : Json{{"ratio_spread", law.ratio_spread}});
    if (!o.mc) return;
    auto w = mc_teleport_walk(g, o.c, o.steps, o.seed, variant);
    rep.quantity("mc", Json{{"segments", w.segments}, {"accepted", w.accepted}, {"trivial", w.trivial},
                            {"rejected", w.rejected}, {"odd", w.odd},
                            {"chi_square_distance", w.chi_square_distance},
                            {"outside_3sigma", w.outside_3sigma}, {"min_p_value", w.min_p_value},
                            {"occupancy_degree_p", w.occupancy_degree_p},
                            {"occupancy_stationary_p", w.occupancy_stationary_p}},
                 Tag::sampled);
    rep.certify("mc-law", w.matches, "Monte Carlo midpoint tallies match the exact law at 3 sigma, family-wise",
                Json{{"min_p_value", w.min_p_value}});
    rep.certify("mc-occupancy", w.occupancy_stationary, "token occupancy matches the chain's stationary law");
    rep.certify("occupancy-degree", w.occupancy_degree_proportional, "token occupancy is proportional to degree",
                Json{{"p", w.occupancy_degree_p}});
}

void cmd_suite(const Options& o, ExperimentReport& rep, std::ostream& err)
{
    auto list = select_criteria(o.suite_name);
    auto results = run_criteria(list, o.seed, o.threads, [&](const CriterionResult& r) {
        err << "criterion " << r.criterion->id << " " << r.criterion->slug << ": " << (r.pass() ? "PASS" : "FAIL")
            << "\n";
    });
    auto agg = suite_report(results);
    rep.quantities = agg.quantities;
    rep.certificates = agg.certificates;
    Json summary = Json::object();
    for (const auto& r : results) summary[std::to_string(r.criterion->id) + "-" + r.criterion->slug] = r.pass();
    rep.quantity("criteria", summary);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"Lipschitz concentration and discrete curvature experiments", "lipcurv"};
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("--out", o.out, "write the report to FILE");
    app.add_option("--seed", o.seed, "seed for every random choice");
    app.add_option("--threads", o.threads, "workers for suite runs")->check(CLI::PositiveNumber);
    app.add_option("--format", o.format, "report format")->check(CLI::IsMember({"json"}));

    auto space_arg = [&](CLI::App* sub, const char* what) { sub->add_option(what, o.space)->required(); };

    auto* sp = app.add_subcommand("space", "describe a metric space");
    space_arg(sp, "space");

    auto* sigma = app.add_subcommand("sigma", "subgaussian constant");
    space_arg(sigma, "graph");
    sigma->add_option("--tmin", o.tmin);
    sigma->add_option("--tmax", o.tmax);
    sigma->add_option("--tpoints", o.tpoints)->check(CLI::PositiveNumber);
    sigma->add_flag("--curve", o.curve, "include the log-moment envelope");

    auto* cvar = app.add_subcommand("cvar", "maximum variance of Lipschitz functions");
    space_arg(cvar, "graph");
    cvar->add_flag("--fields", o.fields, "list every extremal field");

    auto* structure = app.add_subcommand("structure", "structure checks for a field");
    space_arg(structure, "graph");
    structure->add_option("field", o.field)->required();

    auto* odd = app.add_subcommand("odd-cycle", "envelope witnesses on a cycle");
    odd->add_option("--n", o.n)->required();
    odd->add_option("--tmin", o.tmin);
    odd->add_option("--tmax", o.tmax);
    odd->add_option("--tpoints", o.tpoints)->check(CLI::PositiveNumber);

    auto* tree = app.add_subcommand("tree-search", "distance roots of optimal fields on random trees");
    tree->add_option("--trials", o.trials);
    tree->add_option("--max-n", o.max_n);

    auto* iso = app.add_subcommand("iso", "isoperimetric function");
    space_arg(iso, "graph");
    iso->add_option("--d", o.d)->required();

    auto* lvl = app.add_subcommand("level-set", "level set of a field on a power of a space");
    space_arg(lvl, "space");
    lvl->add_option("--field", o.field)->required();
    lvl->add_option("--r", o.r_text)->required();
    lvl->add_option("--power", o.power)->check(CLI::PositiveNumber);

    auto* ce = app.add_subcommand("counterexample", "constructions and counterexamples");
    ce->require_subcommand(1);
    auto* cat = ce->add_subcommand("caterpillar");
    cat->add_option("--k", o.k)->required();
    cat->add_option("--n", o.n)->required();
    auto* trip = ce->add_subcommand("tripod");
    trip->add_option("--k", o.k)->required();
    trip->add_flag("--star", o.star);
    auto* iter = ce->add_subcommand("iterated-midpoint");
    auto* neg = ce->add_subcommand("negative-curvature");
    neg->add_option("--k", o.k);

    auto* mid = app.add_subcommand("midpoints", "discrete midpoints of two points");
    space_arg(mid, "space");
    mid->add_option("--a", o.a)->required();
    mid->add_option("--b", o.b)->required();
    mid->add_option("--rho", o.rho);

    auto* clo = app.add_subcommand("closure", "convex closure of a set");
    space_arg(clo, "space");
    clo->add_option("--set", o.set)->required();

    auto* bm = app.add_subcommand("bm-scan", "Brunn-Minkowski curvature scan");
    space_arg(bm, "space");
    bm->add_option("--samples", o.samples);
    bm->add_option("--S", o.S);
    bm->add_option("--T", o.T);
    bm->add_option("--rho", o.rho);

    auto* phi = app.add_subcommand("phi-check", "injectivity of the midpoint map");
    space_arg(phi, "space");
    phi->add_option("--S", o.S)->required();
    phi->add_option("--T", o.T)->required();
    phi->add_option("--rho", o.rho);
    phi->add_option("--r", o.R)->required();

    auto* ot = app.add_subcommand("ot", "optimal transport between two distributions");
    space_arg(ot, "space");
    ot->add_option("--muA", o.muA)->required();
    ot->add_option("--muB", o.muB)->required();
    ot->add_option("--order", o.order);
    ot->add_flag("--max-entropy", o.max_entropy);
    ot->add_flag("--forest", o.forest);

    auto* conv = app.add_subcommand("convexity-check", "entropic displacement convexity");
    space_arg(conv, "space");
    conv->add_option("--muA", o.muA)->required();
    conv->add_option("--muB", o.muB)->required();
    conv->add_option("--t", o.t);
    conv->add_option("--K", o.K);
    conv->add_option("--flavor", o.flavor);

    auto* strong = app.add_subcommand("strong-convexity", "strong displacement convexity of a graph");
    space_arg(strong, "graph");

    auto* bounds = app.add_subcommand("bounds", "concentration bounds");
    bounds->require_subcommand(1);
    auto* tail = bounds->add_subcommand("tail");
    tail->set_help_flag("--help", "Print this help message and exit");  // frees --h
    tail->add_option("--sigma2", o.sigma2)->required();
    tail->add_option("--h", o.h)->required();
    tail->add_option("--variant", o.tail_variant);
    tail->add_option("--graph", o.graph, "check the extremal fields of this space");
    auto* sn = bounds->add_subcommand("sn");
    sn->add_option("--n", o.n)->required();
    auto* perm = bounds->add_subcommand("permutation");
    perm->add_option("--n", o.n)->required();
    auto* levels = bounds->add_subcommand("levels");
    levels->add_option("--n", o.n)->required();
    levels->add_option("--r", o.r)->required();
    auto* search = bounds->add_subcommand("levels-search");
    search->add_option("--max-k", o.max_k);
    auto* far = bounds->add_subcommand("linear-far");
    far->add_option("--n", o.n)->required();
    far->add_option("--c", o.c)->required();
    far->add_option("--R", o.R)->required();
    far->add_option("--levels", o.levels)->required()->delimiter(',');
    far->add_option("--trials", o.trials);

    auto* exp = app.add_subcommand("expander", "midpoints between sets of a regular graph");
    space_arg(exp, "graph");
    exp->add_option("--S", o.S)->required();
    exp->add_option("--T", o.T)->required();
    exp->add_option("--pairs", o.pairs);

    auto* geo = app.add_subcommand("geodesic-law", "midpoint law of random geodesics");
    space_arg(geo, "graph");
    geo->add_option("--variant", o.variant);
    geo->add_flag("--mc", o.mc);
    geo->add_option("--c", o.c);
    geo->add_option("--steps", o.steps);

    auto* suite = app.add_subcommand("suite", "acceptance battery");
    suite->add_option("name", o.suite_name)->required()->check(CLI::IsMember({"paper-examples", "invariants", "all"}));

    std::vector<std::string> argv_store{"lipcurv"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "lipcurv: " << e.what() << "\n";
        return 2;
    }

    ExperimentReport rep;
    rep.command = args;
    rep.seed = o.seed;
    const auto start = std::chrono::steady_clock::now();
    try {
        if (sp->parsed()) cmd_space(o, rep);
        else if (sigma->parsed()) cmd_sigma(o, rep);
        else if (cvar->parsed()) cmd_cvar(o, rep);
        else if (structure->parsed()) cmd_structure(o, rep);
        else if (odd->parsed()) cmd_odd_cycle(o, rep);
        else if (tree->parsed()) cmd_tree_search(o, rep);
        else if (iso->parsed()) cmd_iso(o, rep);
        else if (lvl->parsed()) cmd_level_set(o, rep);
        else if (cat->parsed()) cmd_caterpillar(o, rep);
        else if (trip->parsed()) cmd_tripod(o, rep);
        else if (iter->parsed()) cmd_iterated(o, rep);
        else if (neg->parsed()) cmd_negative(o, rep);
        else if (mid->parsed()) cmd_midpoints(o, rep);
        else if (clo->parsed()) cmd_closure(o, rep);
        else if (bm->parsed()) cmd_bm_scan(o, rep);
        else if (phi->parsed()) cmd_phi(o, rep);
        else if (ot->parsed()) cmd_ot(o, rep);
        else if (conv->parsed()) cmd_convexity(o, rep);
        else if (strong->parsed()) cmd_strong(o, rep);
        else if (tail->parsed()) cmd_bounds_tail(o, rep);
        else if (sn->parsed()) cmd_bounds_sn(o, rep);
        else if (perm->parsed()) cmd_bounds_permutation(o, rep);
        else if (levels->parsed()) cmd_bounds_levels(o, rep);
        else if (search->parsed()) cmd_bounds_levels_search(o, rep);
        else if (far->parsed()) cmd_bounds_linear_far(o, rep);
        else if (exp->parsed()) cmd_expander(o, rep);
        else if (geo->parsed()) cmd_geodesic(o, rep);
        else if (suite->parsed()) cmd_suite(o, rep, err);
    } catch (const Error& e) {
        err << "lipcurv: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        err << "lipcurv: bad-file: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "lipcurv: " << e.what() << "\n";
        return 2;
    }
    rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const std::string text = rep.dump() + "\n";
    if (o.out.empty()) {
        out << text;
    } else {
        std::ofstream f(o.out, std::ios::binary);
        if (!f || !(f << text)) {
            err << "lipcurv: cannot write " << o.out << "\n";
            return 2;
        }
    }
    return rep.all_pass() ? 0 : 1;
}

int run(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace lipcurv
