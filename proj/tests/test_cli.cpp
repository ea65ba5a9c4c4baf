#include "doctest.h"

#include "lipcurv/cli.hpp"
#include "lipcurv/report.hpp"
#include "lipcurv/suite.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <sys/wait.h>

using namespace lipcurv;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code = -1;
    std::string out, err;
    Json report;
};

Outcome cli(std::vector<std::string> args)
{
    Outcome o;
    std::ostringstream out, err;
    o.code = run(args, out, err);
    o.out = out.str();
    o.err = err.str();
    if (o.code != 2 && !o.out.empty() && o.out[0] == '{') o.report = Json::parse(o.out);
    return o;
}

bool passed(const Outcome& o, const std::string& cert)
{
    return o.report.at("certificates").at(cert).at("pass").get<bool>();
}

const Json& value(const Outcome& o, const std::string& q)
{
    return o.report.at("quantities").at(q).at("value");
}

class TempDir {
public:
    TempDir() : path_(fs::temp_directory_path() / ("lipcurv_cli_" + std::to_string(::getpid())))
    {
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string write(const std::string& name, const std::string& text) const
    {
        auto p = path_ / name;
        std::ofstream(p) << text;
        return p.string();
    }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    fs::path path_;
};

}  // namespace

TEST_CASE("exit codes")
{
    auto k2 = cli({"sigma", "complete:2"});
    CHECK(k2.code == 0);
    CHECK(value(k2, "sigma2").get<double>() == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(value(k2, "c2") == "1/4");

    CHECK(cli({"sigma", "badname"}).code == 2);
    CHECK(cli({"nosuchcommand"}).code == 2);
    CHECK(cli({}).code == 2);
    CHECK(cli({"sigma"}).code == 2);
    CHECK(cli({"sigma", "complete:2", "--format", "xml"}).code == 2);
    CHECK(cli({"suite", "everything"}).code == 2);
    CHECK(cli({"closure", "hypercube:3", "--set", "/nonexistent/set.json"}).code == 2);
    CHECK(cli({"--help"}).code == 0);

    // X is Lipschitz and optimal, but literal containment fails for r <= k.
    auto cat = cli({"counterexample", "caterpillar", "--k", "4", "--n", "1"});
    CHECK(cat.code == 1);
    CHECK(passed(cat, "x-lipschitz"));
    CHECK(passed(cat, "x-variance-optimal"));
    CHECK_FALSE(passed(cat, "containment"));
    for (const auto& f : cat.report["certificates"]["containment"]["witness"]) {
        auto r = parse_rational(f["r"].get<std::string>());
        CHECK(r <= 4);
    }
}

TEST_CASE("binary entry point")
{
    const std::string cmd = std::string(LIPCURV_CLI_PATH) + " sigma complete:2 --seed 3 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe);
    std::string text;
    std::array<char, 4096> buf{};
    while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) text.append(buf.data(), n);
    int status = pclose(pipe);
    CHECK(WEXITSTATUS(status) == 0);
    auto j = Json::parse(text);
    CHECK(j["seed"] == 3);
    CHECK(j["quantities"]["sigma2"]["value"].get<double>() == doctest::Approx(0.25));

    const std::string bad = std::string(LIPCURV_CLI_PATH) + " sigma badname >/dev/null 2>&1";
    CHECK(WEXITSTATUS(std::system(bad.c_str())) == 2);
}

TEST_CASE("report round trip and determinism")
{
    auto a = cli({"bm-scan", "hypercube:6", "--samples", "300", "--seed", "11"});
    auto b = cli({"bm-scan", "hypercube:6", "--samples", "300", "--seed", "11"});
    REQUIRE(a.code == 0);
    auto ra = ExperimentReport::from_json(a.report), rb = ExperimentReport::from_json(b.report);
    CHECK(ra.dump(false) == rb.dump(false));
    // Bit-exact: parsing the dump and dumping again reproduces it.
    CHECK(ra.dump() + "\n" == a.out);
    CHECK(ExperimentReport::from_json(Json::parse(ra.dump())).dump() == ra.dump());

    ExperimentReport r;
    r.command = {"x"};
    r.seed = 5;
    r.input("a", "abc");
    r.quantity("third", 1.0 / 3, Tag::estimate);
    r.quantity("q", to_json(Rational(-7, 3)));
    r.quantity("tiny", 5e-324, Tag::bound);
    r.certify("ok", true, "always");
    r.certify("bad", false, "never", Json{{"w", 1}});
    auto back = ExperimentReport::from_json(Json::parse(r.dump()));
    CHECK(back.dump() == r.dump());
    CHECK(back.quantities[0].value.get<double>() == 1.0 / 3);
    CHECK(back.quantities[1].value == "-7/3");
    CHECK(back.quantities[2].value.get<double>() == 5e-324);
    CHECK_FALSE(back.all_pass());
    // FNV-1a 64 of "abc".
    CHECK(back.inputs[0].fnv1a64 == "e71fa2190541574b");
    CHECK(hex64(fnv1a64("")) == "cbf29ce484222325");
}

TEST_CASE("output file")
{
    TempDir dir;
    auto path = dir.file("report.json");
    auto o = cli({"sigma", "path:3", "--out", path});
    CHECK(o.code == 0);
    CHECK(o.out.empty());
    std::ifstream in(path);
    auto j = Json::parse(in);
    CHECK(j["quantities"]["c2"]["value"] == "2/3");
}

TEST_CASE("command table covers every operation")
{
    const std::vector<std::string> operations{
        "build_graph", "shortest_path_metric", "product", "family", "find_hairs",
        "is_lipschitz", "enumerate_extremal_fields", "variance", "max_variance", "log_moment",
        "log_moment_envelope", "subgaussian_constant", "structure_checks", "odd_cycle_optimality",
        "tree_conjecture_search", "ball", "level_set", "iso_function", "caterpillar_counterexample",
        "tripod_examples", "midpoints_hat", "midpoints_tilde", "is_convex", "convex_closure",
        "iterated_midpoint_counterexample", "bm_curvature", "bm_scan", "phi_injection_check", "wasserstein",
        "is_cyclically_monotone", "max_entropy_optimal_plan", "partition", "everybody_is_large_check",
        "interpolate", "entropy", "displacement_convexity_slack", "weak_curvature_bounds",
        "strong_convexity_characterization", "acyclic_optimal_transport", "tail_bound", "empirical_tail",
        "permutation_variance", "level_set_bounds", "sn_bounds_report", "expander_midpoints",
        "exact_midpoint_law", "mc_teleport_walk", "power_law_graph", "run", "suite"};
    std::set<std::string> covered;
    for (const auto& c : command_table()) {
        covered.insert(c.operations.begin(), c.operations.end());
        CHECK_MESSAGE(cli({c.name, "--help"}).code == 0, c.name);
    }
    for (const auto& op : operations) CHECK_MESSAGE(covered.count(op) == 1, op);

    std::size_t examples = select_criteria("paper-examples").size(), invariants = select_criteria("invariants").size();
    CHECK(examples + invariants == 18);
    CHECK(select_criteria("all").size() == 18);
    CHECK_THROWS_AS(select_criteria("some"), Error);
}

TEST_CASE("metric and Lipschitz commands")
{
    TempDir dir;
    auto s = cli({"space", "tripod:2"});
    CHECK(s.code == 0);
    CHECK(value(s, "points") == 9);
    CHECK(value(s, "hairs").size() == 3);
    CHECK(cli({"space", "product:l0:complete:3*complete:2"}).code == 0);
    auto graph = dir.write("g.json", R"({"n": 4, "edges": [[0,1],[1,2],[2,3],[3,0]]})");
    auto sq = cli({"space", graph});
    CHECK(sq.code == 0);
    CHECK(value(sq, "diameter") == 2);
    CHECK(sq.report["inputs"].contains(graph));
    CHECK(cli({"space", dir.write("broken.json", "{\"n\": 3, ")}).code == 2);

    auto cv = cli({"cvar", "path:3", "--fields"});
    CHECK(cv.code == 0);
    CHECK(value(cv, "c2") == "2/3");

    auto field = dir.write("c5.json", R"({"anchor": "0", "values": {"0": "0", "1": "1", "2": "2", "3": "2", "4": "1"}})");
    auto st = cli({"structure", "cycle:5", field});
    CHECK(st.code == 0);
    CHECK(value(st, "variance") == "14/25");
    auto missing = dir.write("short.json", R"({"values": {"0": "0"}})");
    CHECK(cli({"structure", "cycle:5", missing}).code == 2);
    auto far = dir.write("far.json", R"({"values": {"0": "0", "1": "3", "2": "2", "3": "2", "4": "1"}})");
    auto nl = cli({"structure", "cycle:5", far});
    CHECK(nl.code == 1);
    CHECK_FALSE(passed(nl, "lipschitz"));

    CHECK(cli({"odd-cycle", "--n", "5", "--tpoints", "40"}).code == 0);
    CHECK(cli({"tree-search", "--trials", "5", "--max-n", "7"}).code == 0);
}

TEST_CASE("isoperimetry and hypercube commands")
{
    TempDir dir;
    // Three consecutive vertices of C_6 reach five within distance 1.
    auto iso = cli({"iso", "cycle:6", "--d", "1"});
    CHECK(iso.code == 0);
    CHECK(value(iso, "value") == 5);

    auto field = dir.write("p3.json", R"({"values": {"0": "0", "1": "1", "2": "2"}})");
    auto ls = cli({"level-set", "path:3", "--field", field, "--r", "1", "--power", "2"});
    CHECK(ls.code == 0);
    CHECK(value(ls, "size") == 3);

    CHECK(cli({"counterexample", "tripod", "--k", "3"}).code == 0);
    CHECK(cli({"counterexample", "iterated-midpoint"}).code == 0);
    CHECK(cli({"counterexample", "negative-curvature", "--k", "5"}).code == 0);

    auto mid = cli({"midpoints", "hypercube:4", "--a", "{}", "--b", "{1,2,3,4}"});
    CHECK(mid.code == 0);
    CHECK(value(mid, "count") == 6);
    auto odd = cli({"midpoints", "cycle:5", "--a", "0", "--b", "1", "--rho", "1/3"});
    CHECK(odd.code == 0);
    CHECK(value(odd, "tilde").size() == 1);
    CHECK(cli({"midpoints", "cycle:5", "--a", "0", "--b", "9"}).code == 2);
    CHECK(cli({"midpoints", "cycle:5", "--a", "0", "--b", "1", "--rho", "3/2"}).code == 2);

    auto set = dir.write("set.json", R"(["{1}", "{2}"])");
    auto cl = cli({"closure", "hypercube:3", "--set", set});
    CHECK(cl.code == 0);
    CHECK(value(cl, "closure_size") == 4);
    CHECK_FALSE(value(cl, "convex").get<bool>());

    auto S = dir.write("S.json", R"(["{}"])"), T = dir.write("T.json", R"(["{1,2,3,4}"])");
    auto one = cli({"bm-scan", "hypercube:4", "--S", S, "--T", T});
    CHECK(one.code == 0);
    CHECK(value(one, "midpoints") == 6);
    CHECK(cli({"bm-scan", "cycle:5"}).code == 2);
    CHECK(cli({"phi-check", "hypercube:4", "--S", S, "--T", T, "--r", "4"}).code != 2);
}

TEST_CASE("transport commands")
{
    TempDir dir;
    auto a = dir.write("a.json", R"({"0": "1"})"), b = dir.write("b.json", R"({"2": "1"})");
    auto ot = cli({"ot", "path:3", "--muA", a, "--muB", b, "--max-entropy", "--forest"});
    CHECK(ot.code == 0);
    CHECK(value(ot, "W") == "4/1");
    auto h = dir.write("h.json", R"({"{}": "1/2", "{1,2}": "1/2"})"), k = dir.write("k.json", R"({"{1}": "1", "{2}": 0})");
    auto ot2 = cli({"ot", "hypercube:2", "--muA", h, "--muB", k, "--order", "1"});
    CHECK(ot2.code == 0);
    CHECK(value(ot2, "W") == "1/1");
    CHECK(cli({"ot", "hypercube:2", "--muA", h, "--muB", dir.write("bad.json", R"({"{1}": "1/3"})")}).code == 2);
    CHECK(cli({"ot", "hypercube:2", "--muA", h, "--muB", k, "--order", "3"}).code == 2);

    auto p = dir.write("p.json", R"({"{}": "1"})"), q = dir.write("q.json", R"({"{1,2}": "1"})");
    auto cc = cli({"convexity-check", "hypercube:2", "--muA", p, "--muB", q, "--t", "1/2", "--K", "0", "--flavor", "strong"});
    CHECK(cc.code == 0);
    CHECK(value(cc, "slack").get<double>() == doctest::Approx(std::log(2.0)));
    CHECK(cli({"convexity-check", "hypercube:2", "--muA", p, "--muB", q, "--flavor", "odd"}).code == 2);

    CHECK(cli({"strong-convexity", "cycle:5"}).code == 0);
    auto star = cli({"strong-convexity", "star:3"});
    CHECK(star.code == 0);
    CHECK_FALSE(value(star, "recognized").get<bool>());
}

TEST_CASE("bound, expander and geodesic commands")
{
    TempDir dir;
    auto tail = cli({"bounds", "tail", "--sigma2", "1", "--h", "2"});
    CHECK(tail.code == 0);
    CHECK(value(tail, "bound").get<double>() == doctest::Approx(std::exp(-2.0)));
    CHECK(cli({"bounds", "tail", "--sigma2", "0.25", "--h", "0.5", "--graph", "complete:2"}).code == 0);
    CHECK(cli({"bounds", "tail", "--sigma2", "1", "--h", "-1"}).code == 2);
    CHECK(cli({"bounds", "permutation", "--n", "4"}).code == 0);
    CHECK(cli({"bounds", "permutation", "--n", "5"}).code == 1);
    CHECK(cli({"bounds", "sn", "--n", "3"}).code == 0);
    CHECK(cli({"bounds", "levels", "--n", "4", "--r", "0"}).code == 0);
    CHECK(cli({"bounds", "levels-search", "--max-k", "5"}).code == 0);
    CHECK(cli({"bounds", "linear-far", "--n", "10", "--c", "10", "--R", "3", "--levels", "4,5,6", "--trials", "3"})
              .code == 0);
    CHECK(cli({"bounds", "linear-far", "--n", "10", "--c", "2", "--R", "3", "--levels", "5"}).code == 1);

    auto S = dir.write("S.json", "[0]"), T = dir.write("T.json", "[7]");
    auto ex = cli({"expander", "petersen", "--S", S, "--T", T, "--pairs", "100"});
    CHECK(ex.code == 0);
    CHECK(value(ex, "lambda2").get<double>() == doctest::Approx(1.0 / 3));
    CHECK(cli({"expander", "path:4", "--S", S, "--T", S}).code == 2);

    auto c6 = cli({"geodesic-law", "cycle:6", "--mc", "--c", "0.9", "--steps", "100000"});
    CHECK(c6.code == 0);
    for (const auto& [v, p] : value(c6, "law").items()) CHECK(p == "1/6");
    CHECK(cli({"geodesic-law", "path:5"}).code == 1);
    CHECK(cli({"geodesic-law", "path:5", "--variant", "2"}).code == 0);
    CHECK(cli({"geodesic-law", "path:5", "--variant", "3"}).code == 2);
    CHECK(cli({"geodesic-law", "powerlaw:40:2.5:3"}).code != 2);
}
