#include "lipcurv/report.hpp"

#include <array>
#include <cstdio>

namespace lipcurv {

namespace {

constexpr std::array<std::pair<Tag, const char*>, 5> tag_names{{
    {Tag::exact, "exact"},
    {Tag::estimate, "estimate"},
    {Tag::lower_estimate, "lower-estimate"},
    {Tag::bound, "bound"},
    {Tag::sampled, "sampled"},
}};

}  // namespace

std::string tag_name(Tag t)
{
    for (auto [tag, name] : tag_names)
        if (tag == t) return name;
    return "exact";
}

Tag parse_tag(const std::string& name)
{
    for (auto [tag, n] : tag_names)
        if (name == n) return tag;
    throw Error("bad-report", "unknown tag " + name);
}

void ExperimentReport::quantity(std::string name, Json value, Tag tag)
{
    quantities.push_back({std::move(name), std::move(value), tag});
}

void ExperimentReport::certify(std::string name, bool pass, std::string check, Json witness)
{
    certificates.push_back({std::move(name), pass, std::move(check), std::move(witness)});
}

void ExperimentReport::input(std::string name, std::string_view bytes)
{
    inputs.push_back({std::move(name), hex64(fnv1a64(bytes))});
}

bool ExperimentReport::all_pass() const
{
    for (const auto& c : certificates)
        if (!c.pass) return false;
    return true;
}

void ExperimentReport::merge(const ExperimentReport& other, const std::string& prefix)
{
    for (const auto& q : other.quantities) quantities.push_back({prefix + "/" + q.name, q.value, q.tag});
    for (const auto& c : other.certificates) certificates.push_back({prefix + "/" + c.name, c.pass, c.check, c.witness});
}

Json ExperimentReport::to_json(bool with_wall_time) const
{
    Json j;
    j["command"] = command;
    j["seed"] = seed;
    Json in = Json::object();
    for (const auto& d : inputs) in[d.name] = d.fnv1a64;
    j["inputs"] = in;
    Json qs = Json::object();
    for (const auto& q : quantities) qs[q.name] = Json{{"value", q.value}, {"tag", tag_name(q.tag)}};
    j["quantities"] = qs;
    Json cs = Json::object();
    for (const auto& c : certificates) {
        Json e;
        e["pass"] = c.pass;
        e["check"] = c.check;
        if (!c.witness.is_null()) e["witness"] = c.witness;
        cs[c.name] = e;
    }
    j["certificates"] = cs;
    j["all_pass"] = all_pass();
    if (with_wall_time) j["wall_time"] = wall_time;
    return j;
}

ExperimentReport ExperimentReport::from_json(const Json& j)
{
    ExperimentReport r;
    try {
        r.command = j.at("command").get<std::vector<std::string>>();
        r.seed = j.at("seed").get<std::uint64_t>();
        for (const auto& [name, digest] : j.at("inputs").items()) r.inputs.push_back({name, digest.get<std::string>()});
        for (const auto& [name, q] : j.at("quantities").items())
            r.quantities.push_back({name, q.at("value"), parse_tag(q.at("tag").get<std::string>())});
        for (const auto& [name, c] : j.at("certificates").items())
            r.certificates.push_back({name, c.at("pass").get<bool>(), c.at("check").get<std::string>(),
                                      c.contains("witness") ? c.at("witness") : Json(nullptr)});
        if (j.contains("wall_time")) r.wall_time = j.at("wall_time").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw Error("bad-report", e.what());
    }
    return r;
}

std::string ExperimentReport::dump(bool with_wall_time) const
{
    return to_json(with_wall_time).dump(2);
}

std::uint64_t fnv1a64(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t x)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
    return buf;
}

Json to_json(const Rational& q)
{
    return to_string(q);
}

Json rationals(const std::vector<Rational>& v)
{
    Json out = Json::array();
    for (const auto& q : v) out.push_back(to_string(q));
    return out;
}

}  // namespace lipcurv
