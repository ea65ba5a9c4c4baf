#pragma once

#include "lipcurv/core.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lipcurv {

using Json = nlohmann::ordered_json;

// How a quantity was obtained.
enum class Tag { exact, estimate, lower_estimate, bound, sampled };
std::string tag_name(Tag t);
Tag parse_tag(const std::string& name);

struct Quantity {
    std::string name;
    Json value;
    Tag tag = Tag::exact;
};

struct Certificate {
    std::string name;
    bool pass = false;
    std::string check;  // the statement being tested, in words
    Json witness;
};

struct InputDigest {
    std::string name;
    std::string fnv1a64;  // 16 hex digits
};

struct ExperimentReport {
    std::vector<std::string> command;
    std::uint64_t seed = 0;
    std::vector<InputDigest> inputs;
    std::vector<Quantity> quantities;
    std::vector<Certificate> certificates;
    double wall_time = 0;  // seconds

    void quantity(std::string name, Json value, Tag tag = Tag::exact);
    void certify(std::string name, bool pass, std::string check, Json witness = nullptr);
    void input(std::string name, std::string_view bytes);
    bool all_pass() const;
    // Appends another report's quantities and certificates under `prefix/`.
    void merge(const ExperimentReport& other, const std::string& prefix);

    Json to_json(bool with_wall_time = true) const;
    static ExperimentReport from_json(const Json& j);
    std::string dump(bool with_wall_time = true) const;
};

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t x);

Json to_json(const Rational& q);  // "p/q"
Json rationals(const std::vector<Rational>& v);

}  // namespace lipcurv
