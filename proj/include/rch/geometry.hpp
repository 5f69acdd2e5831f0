#pragma once

#include "rch/field.hpp"
#include "rch/rational.hpp"

#include <algorithm>
#include <compare>
#include <limits>
#include <ostream>
#include <vector>

namespace rch {

template <class F>
struct Point2 {
    F x{};
    F y{};

    friend Point2 operator+(const Point2& a, const Point2& b) { return {a.x + b.x, a.y + b.y}; }
    friend Point2 operator-(const Point2& a, const Point2& b) { return {a.x - b.x, a.y - b.y}; }
    friend Point2 operator*(const F& s, const Point2& a) { return {s * a.x, s * a.y}; }
    friend bool operator==(const Point2& a, const Point2& b) { return a.x == b.x && a.y == b.y; }
    // Lexicographic (x, then y).
    friend bool operator<(const Point2& a, const Point2& b)
    {
        if (a.x != b.x) return a.x < b.x;
        return a.y < b.y;
    }
};

/// A diagonal 2x2 matrix diag(x, y), exact.
using PlanarPoint = Point2<Rational>;

template <class F>
F cross(const Point2<F>& a, const Point2<F>& b)
{
    return a.x * b.y - a.y * b.x;
}

template <class F>
F dot(const Point2<F>& a, const Point2<F>& b)
{
    return a.x * b.x + a.y * b.y;
}

/// Upper-triangular matrix ((x, z), (0, y)) identified with a point of R^3.
struct TriPoint {
    Rational x;
    Rational y;
    Rational z;

    friend TriPoint operator+(const TriPoint& a, const TriPoint& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend TriPoint operator-(const TriPoint& a, const TriPoint& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend TriPoint operator*(const Rational& s, const TriPoint& a) { return {s * a.x, s * a.y, s * a.z}; }
    friend bool operator==(const TriPoint& a, const TriPoint& b) { return a.x == b.x && a.y == b.y && a.z == b.z; }
    friend bool operator<(const TriPoint& a, const TriPoint& b)
    {
        if (a.x != b.x) return a.x < b.x;
        if (a.y != b.y) return a.y < b.y;
        return a.z < b.z;
    }
};

inline std::ostream& operator<<(std::ostream& os, const TriPoint& p)
{
    return os << '(' << p.x << ", " << p.y << ", " << p.z << ')';
}

inline std::ostream& operator<<(std::ostream& os, const PlanarPoint& p)
{
    return os << '(' << p.x << ", " << p.y << ')';
}

inline PlanarPoint project(const TriPoint& p)
{
    return {p.x, p.y};
}

inline TriPoint lift(const PlanarPoint& p, Rational z)
{
    return {p.x, p.y, std::move(z)};
}

/// True iff b - a is a nonzero rank-one upper-triangular matrix, i.e. its
/// diagonal part lies on {xy = 0}.
inline bool rank_one_connected(const TriPoint& a, const TriPoint& b)
{
    if (a == b) return false;
    return (a.x - b.x) * (a.y - b.y) == 0;
}

inline bool rank_one_connected(const PlanarPoint& a, const PlanarPoint& b)
{
    if (a == b) return false;
    return a.x == b.x || a.y == b.y;
}

inline Rational squared_distance(const TriPoint& a, const TriPoint& b)
{
    const TriPoint d = a - b;
    return d.x * d.x + d.y * d.y + d.z * d.z;
}

inline double squared_distance_to_set(const TriPoint& p, const std::vector<TriPoint>& set)
{
    double best = std::numeric_limits<double>::infinity();
    const double px = p.x.get_d(), py = p.y.get_d(), pz = p.z.get_d();
    for (const auto& k : set) {
        const double dx = px - k.x.get_d(), dy = py - k.y.get_d(), dz = pz - k.z.get_d();
        best = std::min(best, dx * dx + dy * dy + dz * dz);
    }
    return best;
}

inline Rational squared_distance_to_set_exact(const TriPoint& p, const std::vector<TriPoint>& set)
{
    if (set.empty()) throw Error("distance to an empty set");
    Rational best = squared_distance(p, set.front());
    for (const auto& k : set) best = std::min(best, squared_distance(p, k));
    return best;
}

/// Deduplicated, lexicographically sorted copy.
template <class P>
std::vector<P> unique_sorted(std::vector<P> pts)
{
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

}  // namespace rch
