#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rch {

/// Exact scalar used by every combinatorial and algebraic computation.
using Rational = mpq_class;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

/// Parses "p", "p/q", or a decimal literal such as "-1.25" into an exact rational.
inline Rational parse_rational(std::string_view text)
{
    std::string s(text);
    while (!s.empty() && s.front() == ' ') s.erase(s.begin());
    while (!s.empty() && s.back() == ' ') s.pop_back();
    if (s.empty()) throw ParseError("empty rational literal");
    if (s.front() == '+') s.erase(s.begin());

    const auto dot = s.find('.');
    const auto exp = s.find_first_of("eE");
    if (dot == std::string::npos && exp == std::string::npos) {
        Rational r;
        if (r.set_str(s, 10) != 0) throw ParseError("malformed rational literal '" + s + "'");
        if (r.get_den() == 0) throw ParseError("zero denominator in '" + s + "'");
        r.canonicalize();
        return r;
    }

    // Decimal with optional exponent: exact conversion, no binary rounding.
    std::string mantissa = exp == std::string::npos ? s : s.substr(0, exp);
    long exponent = 0;
    if (exp != std::string::npos) {
        try {
            exponent = std::stol(s.substr(exp + 1));
        } catch (const std::exception&) {
            throw ParseError("malformed exponent in '" + s + "'");
        }
    }
    bool negative = false;
    if (!mantissa.empty() && (mantissa.front() == '-' || mantissa.front() == '+')) {
        negative = mantissa.front() == '-';
        mantissa.erase(mantissa.begin());
    }
    const auto mdot = mantissa.find('.');
    std::string digits = mantissa;
    if (mdot != std::string::npos) {
        exponent -= static_cast<long>(mantissa.size() - mdot - 1);
        digits.erase(mdot, 1);
    }
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError("malformed decimal literal '" + s + "'");
    mpz_class num(digits, 10);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
    Rational r = exponent < 0 ? Rational(num, scale) : Rational(num * scale);
    r.canonicalize();
    return negative ? Rational(-r) : r;
}

/// Canonical "p/q" (or "p" when q = 1) form.
inline std::string to_string(const Rational& r)
{
    return r.get_str(10);
}

inline double to_double(const Rational& r)
{
    return r.get_d();
}

/// Exact rational value of a binary64 number.
inline Rational from_double(double v)
{
    return Rational(v);
}

inline mpz_class lcm_of_denominators(const std::vector<Rational>& values)
{
    mpz_class l = 1;
    for (const auto& v : values) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
    return l;
}

inline mpz_class gcd_of_numerators(const std::vector<Rational>& values)
{
    mpz_class g = 0;
    for (const auto& v : values) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_num_mpz_t());
    return g;
}

inline Rational abs(const Rational& r)
{
    return r < 0 ? Rational(-r) : r;
}

}  // namespace rch
