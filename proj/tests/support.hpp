#pragma once

// Shared fixtures and independent oracles for the test suites.

#include "rch/geometry.hpp"
#include "rch/laminate.hpp"
#include "rch/rational.hpp"

#include <array>
#include <random>
#include <vector>

namespace rch::test {

inline Rational RS(const char* s)
{
    return parse_rational(s);
}

inline Rational R(long p, long q = 1)
{
    Rational r(p, q);
    r.canonicalize();
    return r;
}

inline PlanarPoint P2(long x, long y)
{
    return {R(x), R(y)};
}

inline TriPoint P3(long x, long y, long z)
{
    return {R(x), R(y), R(z)};
}

/// Five diagonal matrices of the separate-convexity grid example.
inline std::vector<PlanarPoint> five_points_2d()
{
    return {P2(3, 1), P2(1, -3), P2(-3, -1), P2(-1, 3), P2(2, 2)};
}

/// The Tartar square.
inline std::vector<PlanarPoint> tartar_2d()
{
    return {P2(3, 1), P2(1, -3), P2(-3, -1), P2(-1, 3)};
}

/// Five triangular matrices whose hull is cut out by four quadrics.
inline std::vector<TriPoint> five_points_3d()
{
    return {P3(3, 1, 0), P3(1, -3, 0), P3(-3, -1, -1), P3(-1, 3, 0), P3(2, 2, 2)};
}

inline std::vector<TriPoint> tartar_flat_3d()
{
    return {P3(3, 1, 0), P3(1, -3, 0), P3(-3, -1, 0), P3(-1, 3, 0)};
}

// Closed point-in-polygon for a simple (possibly non-convex) polygon, exact.
inline bool on_segment(const PlanarPoint& a, const PlanarPoint& b, const PlanarPoint& p)
{
    if (cross(b - a, p - a) != 0) return false;
    return dot(p - a, p - b) <= 0;
}

inline bool in_polygon(const std::vector<PlanarPoint>& poly, const PlanarPoint& p)
{
    bool inside = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const auto& a = poly[i];
        const auto& b = poly[j];
        if (on_segment(a, b, p)) return true;
        if ((a.y > p.y) != (b.y > p.y)) {
            const Rational xcross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < xcross) inside = !inside;
        }
    }
    return inside;
}

inline Rational polygon_area(const std::vector<PlanarPoint>& poly)
{
    Rational s = 0;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) s += cross(poly[j], poly[i]);
    return abs(s) / 2;
}

inline std::vector<PlanarPoint> random_points(std::mt19937& rng, int n, int lo, int hi)
{
    std::uniform_int_distribution<int> d(lo, hi);
    std::vector<PlanarPoint> out;
    for (int i = 0; i < n; ++i) out.push_back(P2(d(rng), d(rng)));
    return out;
}

inline Rational random_rational(std::mt19937& rng, int lo, int hi, int den)
{
    std::uniform_int_distribution<int> d(lo * den, hi * den);
    return R(d(rng), den);
}

/// A random axis T4: square corner P, legs C1 = (a,0), C2 = (0,b), C3 = -C1,
/// C4 = -C2, multipliers alpha_i >= 1 (about a third of them exactly 1).
/// Returns K_1..K_4 in staircase order.
inline std::array<PlanarPoint, 4> random_t4(std::mt19937& rng)
{
    auto nonzero = [&] {
        Rational v = 0;
        while (v == 0) v = random_rational(rng, -4, 4, 3);
        return v;
    };
    const PlanarPoint p{random_rational(rng, -5, 5, 2), random_rational(rng, -5, 5, 2)};
    const Rational a = nonzero(), b = nonzero();
    const bool vertical_first = rng() % 2;
    std::array<PlanarPoint, 4> c{PlanarPoint{a, 0}, PlanarPoint{0, b}, PlanarPoint{-a, 0}, PlanarPoint{0, -b}};
    if (vertical_first) c = {PlanarPoint{0, b}, PlanarPoint{a, 0}, PlanarPoint{0, -b}, PlanarPoint{-a, 0}};
    std::array<PlanarPoint, 4> k;
    PlanarPoint corner = p;
    for (int i = 0; i < 4; ++i) {
        const Rational alpha = rng() % 3 == 0 ? Rational(1) : 1 + random_rational(rng, 0, 3, 4);
        k[i] = corner + alpha * c[i];
        corner = corner + c[i];
    }
    return k;
}

/// Random laminate with barycenter p: each step splits a random leaf along a
/// random rank-one direction with a random interior ratio.
inline Laminate random_laminate(std::mt19937& rng, const TriPoint& p, int splits)
{
    Laminate l(p);
    for (int s = 0; s < splits; ++s) {
        const std::size_t slot = rng() % l.size();
        const TriPoint& c = l.leaf(slot).point;
        TriPoint d{0, 0, random_rational(rng, -3, 3, 4)};
        const Rational step = random_rational(rng, 1, 3, 4);
        if (rng() % 2)
            d.x = step;
        else
            d.y = step;
        const Rational lambda = R(1 + static_cast<long>(rng() % 7), 8);
        l.split_in_place(slot, c + (1 - lambda) * d, c - lambda * d, lambda);
    }
    return l;
}

}  // namespace rch::test
