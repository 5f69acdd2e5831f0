#pragma once

#include "rch/geometry.hpp"

#include <array>
#include <sstream>
#include <string>

namespace rch {

/// Polynomial c_z*z + c_xy*x*y + c_x*x + c_y*y + c_1.
///
/// Every such polynomial is affine along rank-one directions of triangular
/// matrices: it is affine on each plane {x = const} and {y = const}.
struct RankOnePoly {
    Rational cz{0};
    Rational cxy{0};
    Rational cx{0};
    Rational cy{0};
    Rational c1{0};

    Rational operator()(const Rational& x, const Rational& y, const Rational& z) const
    {
        return cz * z + cxy * x * y + cx * x + cy * y + c1;
    }
    Rational operator()(const TriPoint& p) const { return (*this)(p.x, p.y, p.z); }

    double eval(double x, double y, double z) const
    {
        return cz.get_d() * z + cxy.get_d() * x * y + cx.get_d() * x + cy.get_d() * y + c1.get_d();
    }

    bool is_zero() const { return cz == 0 && cxy == 0 && cx == 0 && cy == 0 && c1 == 0; }

    /// Substitutes x = c; the result no longer depends on x.
    RankOnePoly restrict_x(const Rational& c) const { return {cz, 0, 0, cxy * c + cy, cx * c + c1}; }
    /// Substitutes y = c; the result no longer depends on y.
    RankOnePoly restrict_y(const Rational& c) const { return {cz, 0, cxy * c + cx, 0, cy * c + c1}; }

    friend RankOnePoly operator+(const RankOnePoly& a, const RankOnePoly& b)
    {
        return {a.cz + b.cz, a.cxy + b.cxy, a.cx + b.cx, a.cy + b.cy, a.c1 + b.c1};
    }
    friend RankOnePoly operator-(const RankOnePoly& a, const RankOnePoly& b)
    {
        return {a.cz - b.cz, a.cxy - b.cxy, a.cx - b.cx, a.cy - b.cy, a.c1 - b.c1};
    }
    friend RankOnePoly operator*(const Rational& s, const RankOnePoly& a)
    {
        return {s * a.cz, s * a.cxy, s * a.cx, s * a.cy, s * a.c1};
    }
    friend bool operator==(const RankOnePoly& a, const RankOnePoly& b)
    {
        return a.cz == b.cz && a.cxy == b.cxy && a.cx == b.cx && a.cy == b.cy && a.c1 == b.c1;
    }

    std::array<Rational, 5> coefficients() const { return {cz, cxy, cx, cy, c1}; }

    /// Primitive integer multiple with positive leading (z, else xy, ...) coefficient.
    RankOnePoly integer_scaled() const
    {
        const auto c = coefficients();
        const std::vector<Rational> v(c.begin(), c.end());
        if (is_zero()) return *this;
        const mpz_class l = lcm_of_denominators(v);
        RankOnePoly r = Rational(l) * *this;
        const auto rc = r.coefficients();
        const mpz_class g = gcd_of_numerators(std::vector<Rational>(rc.begin(), rc.end()));
        r = Rational(1, 1) / Rational(g) * r;
        for (const auto& x : r.coefficients()) {
            if (x == 0) continue;
            if (x < 0) r = Rational(-1) * r;
            break;
        }
        return r;
    }

    /// Human-readable form such as "60z + 5xy - 9x - 3y + 15".
    std::string str() const
    {
        std::ostringstream os;
        bool first = true;
        auto term = [&](const Rational& c, const char* mono) {
            if (c == 0) return;
            const bool neg = c < 0;
            const Rational a = neg ? Rational(-c) : c;
            if (first)
                os << (neg ? "-" : "");
            else
                os << (neg ? " - " : " + ");
            if (a != 1 || *mono == '\0') os << a;
            os << mono;
            first = false;
        };
        term(cz, "z");
        term(cxy, "xy");
        term(cx, "x");
        term(cy, "y");
        term(c1, "");
        if (first) os << "0";
        return os.str();
    }
};

/// Monic ruled quadric q(x, y, z) = z + alpha*x*y + beta*x + gamma*y + delta.
struct Quadric {
    Rational alpha{0};
    Rational beta{0};
    Rational gamma{0};
    Rational delta{0};

    Rational operator()(const TriPoint& p) const { return p.z + alpha * p.x * p.y + beta * p.x + gamma * p.y + delta; }

    /// The height z with q(x, y, z) = 0.
    Rational height(const Rational& x, const Rational& y) const { return -(alpha * x * y + beta * x + gamma * y + delta); }

    RankOnePoly poly() const { return {1, alpha, beta, gamma, delta}; }

    /// Normalizes a polynomial with nonzero z coefficient to monic form.
    static Quadric from_poly(const RankOnePoly& p)
    {
        if (p.cz == 0) throw Error("polynomial has no z term");
        return {p.cxy / p.cz, p.cx / p.cz, p.cy / p.cz, p.c1 / p.cz};
    }

    friend bool operator==(const Quadric& a, const Quadric& b)
    {
        return a.alpha == b.alpha && a.beta == b.beta && a.gamma == b.gamma && a.delta == b.delta;
    }
    friend bool operator<(const Quadric& a, const Quadric& b)
    {
        if (a.alpha != b.alpha) return a.alpha < b.alpha;
        if (a.beta != b.beta) return a.beta < b.beta;
        if (a.gamma != b.gamma) return a.gamma < b.gamma;
        return a.delta < b.delta;
    }

    std::string str() const { return poly().integer_scaled().str(); }
};

inline Rational quadric_eval(const Quadric& q, const TriPoint& p)
{
    return q(p);
}

}  // namespace rch
