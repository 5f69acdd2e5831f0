#pragma once

#include "rch/rational.hpp"

#include <cmath>
#include <compare>
#include <ostream>
#include <string>

namespace rch {

/// Element a + b*sqrt(3) of the quadratic field Q(sqrt 3), exact.
class QSqrt3 {
public:
    QSqrt3() = default;
    QSqrt3(Rational a) : a_(std::move(a)) {}  // NOLINT(google-explicit-constructor)
    QSqrt3(int a) : a_(a) {}                  // NOLINT(google-explicit-constructor)
    QSqrt3(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)) {}

    static QSqrt3 sqrt3() { return {0, 1}; }

    const Rational& rational_part() const { return a_; }
    const Rational& sqrt3_part() const { return b_; }

    int sign() const
    {
        const int sa = sgn(a_);
        const int sb = sgn(b_);
        if (sb == 0) return sa;
        if (sa == 0) return sb;
        if (sa == sb) return sa;
        // Opposite signs: compare a^2 with 3 b^2.
        const Rational d = a_ * a_ - 3 * b_ * b_;
        return sa * sgn(d);
    }

    double to_double() const { return a_.get_d() + b_.get_d() * std::sqrt(3.0); }

    QSqrt3 operator-() const { return {-a_, -b_}; }
    QSqrt3& operator+=(const QSqrt3& o)
    {
        a_ += o.a_;
        b_ += o.b_;
        return *this;
    }
    QSqrt3& operator-=(const QSqrt3& o)
    {
        a_ -= o.a_;
        b_ -= o.b_;
        return *this;
    }
    QSqrt3& operator*=(const QSqrt3& o)
    {
        Rational a = a_ * o.a_ + 3 * b_ * o.b_;
        Rational b = a_ * o.b_ + b_ * o.a_;
        a_ = std::move(a);
        b_ = std::move(b);
        return *this;
    }
    QSqrt3& operator/=(const QSqrt3& o)
    {
        const Rational norm = o.a_ * o.a_ - 3 * o.b_ * o.b_;
        if (norm == 0) throw Error("division by zero in Q(sqrt3)");
        *this *= QSqrt3(o.a_ / norm, -o.b_ / norm);
        return *this;
    }

    friend QSqrt3 operator+(QSqrt3 l, const QSqrt3& r) { return l += r; }
    friend QSqrt3 operator-(QSqrt3 l, const QSqrt3& r) { return l -= r; }
    friend QSqrt3 operator*(QSqrt3 l, const QSqrt3& r) { return l *= r; }
    friend QSqrt3 operator/(QSqrt3 l, const QSqrt3& r) { return l /= r; }

    friend bool operator==(const QSqrt3& l, const QSqrt3& r) { return l.a_ == r.a_ && l.b_ == r.b_; }
    friend std::strong_ordering operator<=>(const QSqrt3& l, const QSqrt3& r)
    {
        const int s = (l - r).sign();
        return s < 0 ? std::strong_ordering::less
                     : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    // "a", "b*sqrt3" or "a+b*sqrt3" / "a-b*sqrt3"; coefficient 1 is dropped
    std::string str() const
    {
        if (b_ == 0) return a_.get_str();
        const Rational mag = b_ < 0 ? Rational(-b_) : b_;
        const std::string tail = mag == 1 ? "sqrt3" : mag.get_str() + "*sqrt3";
        if (a_ == 0) return (b_ < 0 ? "-" : "") + tail;
        return a_.get_str() + (b_ < 0 ? "-" : "+") + tail;
    }

private:
    Rational a_{0};
    Rational b_{0};
};

/// Inverse of QSqrt3::str; the rational parts accept anything parse_rational does.
inline QSqrt3 parse_qsqrt3(std::string_view text)
{
    std::string s;
    for (char c : text)
        if (c != ' ') s.push_back(c);
    const auto root = s.find("sqrt3");
    if (root == std::string::npos) return QSqrt3(parse_rational(s));
    if (root + 5 != s.size()) throw ParseError("bad Q(sqrt3) literal: " + std::string(text));
    // split "a" and "b*" at the last sign that is not leading or part of an exponent
    std::size_t cut = std::string::npos;
    for (std::size_t i = root; i-- > 1;)
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            cut = i;
            break;
        }
    const std::string a = cut == std::string::npos ? "0" : s.substr(0, cut);
    std::string b = s.substr(cut == std::string::npos ? 0 : cut, root - (cut == std::string::npos ? 0 : cut));
    if (!b.empty() && b.back() == '*') b.pop_back();
    if (b.empty() || b == "+") b = "1";
    if (b == "-") b = "-1";
    if (b[0] == '+') b.erase(0, 1);
    return QSqrt3(parse_rational(a), parse_rational(b));
}

inline std::ostream& operator<<(std::ostream& os, const QSqrt3& v)
{
    return os << v.str();
}

/// Uniform comparison interface over the scalar fields used by the planar code.
/// Exact fields decide signs without tolerance; binary64 snaps to a tolerance.
template <class F>
struct FieldTraits;

template <>
struct FieldTraits<Rational> {
    static constexpr bool exact = true;
    static int sign(const Rational& v) { return sgn(v); }
    static double to_double(const Rational& v) { return v.get_d(); }
    static std::string str(const Rational& v) { return v.get_str(); }
};

template <>
struct FieldTraits<QSqrt3> {
    static constexpr bool exact = true;
    static int sign(const QSqrt3& v) { return v.sign(); }
    static double to_double(const QSqrt3& v) { return v.to_double(); }
    static std::string str(const QSqrt3& v) { return v.str(); }
};

template <>
struct FieldTraits<double> {
    static constexpr bool exact = false;
    // Snapping tolerance for approximated irrational directions.
    static constexpr double tolerance = 1e-9;
    static int sign(double v) { return v > tolerance ? 1 : (v < -tolerance ? -1 : 0); }
    static double to_double(double v) { return v; }
    static std::string str(double v) { return std::to_string(v); }
};

template <class F>
int field_sign(const F& v)
{
    return FieldTraits<F>::sign(v);
}

template <class F>
int field_compare(const F& a, const F& b)
{
    return field_sign<F>(a - b);
}

template <class F>
bool field_eq(const F& a, const F& b)
{
    return field_compare(a, b) == 0;
}

}  // namespace rch
