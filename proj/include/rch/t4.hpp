#pragma once

#include "rch/cone.hpp"
#include "rch/detail/linsolve.hpp"
#include "rch/quadric.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <optional>
#include <sstream>

namespace rch {

class SingularSystem : public Error {
public:
    using Error::Error;
};

class SingularFit : public Error {
public:
    using Error::Error;
};

/// A planar T4 configuration for the two-axis cone.
///
/// K[i] = P + C[0] + ... + C[i-1] + alpha[i] * C[i], square[0] = P and
/// square[i+1] = square[i] + C[i]. lambda[i] is the weight with
/// square[i] = lambda[i] * K[i-1] + (1 - lambda[i]) * square[i-1] (indices mod 4),
/// so lambda[i] = 1 / alpha[i-1].
struct T4Data {
    std::array<PlanarPoint, 4> K;
    PlanarPoint P;
    std::array<PlanarPoint, 4> C;
    std::array<Rational, 4> alpha;
    std::array<PlanarPoint, 4> square;
    std::array<Rational, 4> lambda;
    std::array<int, 4> order{};  // K[i] is input point order[i]
    int first_axis = 0;          // 0: C[0] horizontal, 1: C[0] vertical

    bool degenerate() const
    {
        return std::any_of(alpha.begin(), alpha.end(), [](const Rational& a) { return a == 1; });
    }
};

namespace detail {

inline std::optional<T4Data> try_t4(const std::array<PlanarPoint, 4>& k, int axis)
{
    T4Data t;
    t.K = k;
    t.first_axis = axis;
    // Forced square corners of the staircase.
    if (axis == 0) {
        t.square = {PlanarPoint{k[3].x, k[0].y}, PlanarPoint{k[1].x, k[0].y}, PlanarPoint{k[1].x, k[2].y},
                    PlanarPoint{k[3].x, k[2].y}};
    } else {
        t.square = {PlanarPoint{k[0].x, k[3].y}, PlanarPoint{k[0].x, k[1].y}, PlanarPoint{k[2].x, k[1].y},
                    PlanarPoint{k[2].x, k[3].y}};
    }
    t.P = t.square[0];
    for (int i = 0; i < 4; ++i) {
        t.C[i] = t.square[(i + 1) % 4] - t.square[i];
        if (t.C[i].x == 0 && t.C[i].y == 0) return std::nullopt;
        const PlanarPoint d = k[i] - t.square[i];
        if (cross(d, t.C[i]) != 0) return std::nullopt;
        t.alpha[i] = dot(d, t.C[i]) / dot(t.C[i], t.C[i]);
        if (t.alpha[i] < 1) return std::nullopt;
    }
    for (int i = 0; i < 4; ++i) t.lambda[i] = 1 / t.alpha[(i + 3) % 4];
    return t;
}

}  // namespace detail

/// Searches all orderings of the four points and both axis choices for the
/// first leg; returns the first T4 found.
inline std::optional<T4Data> detect_t4(const std::array<PlanarPoint, 4>& points,
                                       const DirectionCone& cone = DirectionCone::axis())
{
    if (!cone.is_axis()) throw Error("detect_t4 needs the two-axis cone");
    std::array<int, 4> perm{0, 1, 2, 3};
    do {
        const std::array<PlanarPoint, 4> k{points[perm[0]], points[perm[1]], points[perm[2]], points[perm[3]]};
        for (int axis = 0; axis < 2; ++axis)
            if (auto t = detail::try_t4(k, axis)) {
                t->order = perm;
                return t;
            }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::nullopt;
}

/// Monic quadric through four lifted points; throws SingularFit when their
/// projections lie on a common curve a*xy + b*x + c*y + d = 0.
inline Quadric fit_quadric(const std::array<TriPoint, 4>& pts)
{
    std::vector<std::vector<Rational>> a;
    std::vector<Rational> b;
    for (const auto& p : pts) {
        a.push_back({p.x * p.y, p.x, p.y, 1});
        b.push_back(-p.z);
    }
    const auto s = detail::solve_linear(std::move(a), std::move(b));
    if (!s) throw SingularFit("projected points admit no unique quadric");
    return {(*s)[0], (*s)[1], (*s)[2], (*s)[3]};
}

struct T4Lift {
    T4Data t4;
    std::array<Rational, 4> zK;
    std::array<Rational, 4> zQ;
    Quadric quadric;

    std::array<TriPoint, 4> lifted_K() const
    {
        std::array<TriPoint, 4> out;
        for (int i = 0; i < 4; ++i) out[i] = lift(t4.K[i], zK[i]);
        return out;
    }
    std::array<TriPoint, 4> Q() const
    {
        std::array<TriPoint, 4> out;
        for (int i = 0; i < 4; ++i) out[i] = lift(t4.square[i], zQ[i]);
        return out;
    }
};

/// Fits on the K points, falling back to any nonsingular 4-subset of the
/// eight lift points; checks that the quadric vanishes on all eight.
inline Quadric fit_quadric(const T4Lift& lift_)
{
    const auto k = lift_.lifted_K();
    const auto q = lift_.Q();
    std::array<TriPoint, 8> all{k[0], k[1], k[2], k[3], q[0], q[1], q[2], q[3]};
    std::optional<Quadric> fit;
    try {
        fit = fit_quadric(k);
    } catch (const SingularFit&) {
        for (int mask = 0; mask < 256 && !fit; ++mask) {
            if (__builtin_popcount(mask) != 4) continue;
            std::array<TriPoint, 4> sub;
            int n = 0;
            for (int i = 0; i < 8; ++i)
                if (mask >> i & 1) sub[n++] = all[i];
            try {
                fit = fit_quadric(sub);
            } catch (const SingularFit&) {
            }
        }
    }
    if (!fit) throw SingularFit("no nonsingular 4-subset of the T4 lift");
    for (const auto& p : all)
        if ((*fit)(p) != 0) throw Error("lifted T4 does not lie on one quadric");
    return *fit;
}

/// Heights of the square corners for given heights of K (in t4.K order):
/// z(Q_i) = lambda_i z(K_{i-1}) + (1 - lambda_i) z(Q_{i-1}).
inline T4Lift solve_heights(const T4Data& t4, const std::array<Rational, 4>& z)
{
    std::vector<std::vector<Rational>> a(4, std::vector<Rational>(4, 0));
    std::vector<Rational> b(4);
    for (int i = 0; i < 4; ++i) {
        const int prev = (i + 3) % 4;
        a[i][i] = 1;
        a[i][prev] = t4.lambda[i] - 1;
        b[i] = t4.lambda[i] * z[prev];
    }
    const auto s = detail::solve_linear(std::move(a), std::move(b));
    if (!s) {
        std::ostringstream os;
        os << "singular height system for lambdas";
        for (const auto& l : t4.lambda) os << ' ' << l;
        throw SingularSystem(os.str());
    }
    T4Lift out{t4, z, {(*s)[0], (*s)[1], (*s)[2], (*s)[3]}, {}};
    out.quadric = fit_quadric(out);
    return out;
}

}  // namespace rch
