#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace lipcurv {

using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

// Carries a short machine-readable code ("disconnected", "too-large", ...).
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

std::string to_string(const Rational& q);          // always "p/q"
Rational parse_rational(const std::string& text);  // "p/q", "p", or a decimal
inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline std::uint64_t mix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based generator: output i is mix64(key ^ i).  split() derives an
// independent child stream, so parallel work never shares state.
class Rng {
public:
    using result_type = std::uint64_t;
    explicit Rng(std::uint64_t seed = 0) : key_(mix64(seed)) {}
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type(0); }
    result_type operator()() { return mix64(key_ ^ mix64(counter_++)); }
    Rng split(std::uint64_t stream) const
    {
        Rng child;
        child.key_ = mix64(key_ ^ mix64(stream ^ 0x5851f42d4c957f2dULL));
        return child;
    }
    std::uint64_t below(std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(*this); }
    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(*this); }

private:
    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

}  // namespace lipcurv
