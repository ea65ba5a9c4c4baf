#include "lipcurv/core.hpp"

#include <cctype>

namespace lipcurv {

std::string to_string(const Rational& q)
{
    return numerator(q).str() + "/" + denominator(q).str();
}

Rational parse_rational(const std::string& text)
{
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw Error("bad-number", "empty number");
    try {
        auto slash = s.find('/');
        if (slash != std::string::npos) {
            BigInt p(s.substr(0, slash)), q(s.substr(slash + 1));
            if (q == 0) throw Error("bad-number", "zero denominator in " + text);
            return Rational(p, q);
        }
        auto dot = s.find_first_of(".eE");
        if (dot == std::string::npos) return Rational(BigInt(s));
        // Decimal: exact value of the written digits, not of the nearest double.
        std::size_t e = s.find_first_of("eE");
        std::string mant = s.substr(0, e);
        long exp10 = e == std::string::npos ? 0 : std::stol(s.substr(e + 1));
        bool neg = !mant.empty() && mant[0] == '-';
        if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) mant = mant.substr(1);
        auto p = mant.find('.');
        std::string digits = mant;
        if (p != std::string::npos) {
            digits = mant.substr(0, p) + mant.substr(p + 1);
            exp10 -= static_cast<long>(mant.size() - p - 1);
        }
        if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
            throw Error("bad-number", "cannot parse " + text);
        Rational v{BigInt(digits)};
        BigInt ten = 1;
        for (long i = 0; i < std::labs(exp10); ++i) ten *= 10;
        v = exp10 >= 0 ? v * Rational(ten) : v / Rational(ten);
        return neg ? Rational(-v) : v;
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        throw Error("bad-number", "cannot parse " + text);
    }
}

}  // namespace lipcurv
