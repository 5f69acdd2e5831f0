#include "rch/t4.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace rch;
using namespace rch::test;

namespace {

std::array<PlanarPoint, 4> tartar()
{
    const auto v = tartar_2d();
    return {v[0], v[1], v[2], v[3]};
}

// Heights of the corners by iterating the mixing relation to its exact
// fixed point through the closed form of a 4-cycle, computed independently.
std::array<Rational, 4> corner_heights_oracle(const T4Data& t, const std::array<Rational, 4>& z)
{
    // Unroll Q_i = l_i zK_{i-1} + (1 - l_i) Q_{i-1} once around the cycle.
    std::array<Rational, 4> q;
    for (int s = 0; s < 4; ++s) {
        Rational coef = 1, acc = 0;
        int i = s;
        for (int step = 0; step < 4; ++step) {
            const int prev = (i + 3) % 4;
            acc += coef * t.lambda[i] * z[prev];
            coef *= 1 - t.lambda[i];
            i = prev;
        }
        q[s] = acc / (1 - coef);
    }
    return q;
}

}  // namespace

TEST(DetectT4, Tartar)
{
    const auto t = detect_t4(tartar());
    ASSERT_TRUE(t);
    EXPECT_EQ(t->P, P2(-1, 1));
    EXPECT_EQ(t->C[0], P2(2, 0));
    EXPECT_EQ(t->C[1], P2(0, -2));
    EXPECT_EQ(t->C[2], P2(-2, 0));
    EXPECT_EQ(t->C[3], P2(0, 2));
    for (int i = 0; i < 4; ++i) {
        EXPECT_EQ(t->alpha[i], 2);
        EXPECT_EQ(t->lambda[i], R(1, 2));
    }
    EXPECT_FALSE(t->degenerate());
}

TEST(DetectT4, Rejects)
{
    EXPECT_FALSE(detect_t4({P2(0, 0), P2(1, 0), P2(2, 0), P2(3, 0)}));
    EXPECT_FALSE(detect_t4({P2(0, 0), P2(1, 1), P2(2, 3), P2(5, 7)}));
    EXPECT_FALSE(detect_t4({P2(0, 0), P2(0, 0), P2(1, 0), P2(1, 1)}));
    EXPECT_THROW(detect_t4(tartar(), DirectionCone({P2(1, 1), P2(1, -1)})), Error);
}

TEST(DetectT4, Invariants)
{
    std::mt19937 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const auto k = random_t4(rng);
        const auto t = detect_t4(k);
        ASSERT_TRUE(t);
        PlanarPoint sum{0, 0};
        PlanarPoint partial = t->P;
        for (int i = 0; i < 4; ++i) {
            sum = sum + t->C[i];
            EXPECT_EQ(t->K[i], partial + t->alpha[i] * t->C[i]);
            EXPECT_GE(t->alpha[i], 1);
            EXPECT_TRUE(t->C[i].x == 0 || t->C[i].y == 0);
            EXPECT_NE(t->C[i].x == 0, t->C[(i + 1) % 4].x == 0);
            const int prev = (i + 3) % 4;
            EXPECT_EQ(t->square[i], t->lambda[i] * t->K[prev] + (1 - t->lambda[i]) * t->square[prev]);
            partial = partial + t->C[i];
        }
        EXPECT_EQ(sum, P2(0, 0));

        auto perm = k;
        std::shuffle(perm.begin(), perm.end(), rng);
        EXPECT_TRUE(detect_t4(perm));
    }
}

TEST(SolveHeights, KnownCorner)
{
    const auto pts = five_points_3d();
    const auto t = detect_t4({project(pts[0]), project(pts[1]), project(pts[2]), project(pts[3])});
    ASSERT_TRUE(t);
    std::array<Rational, 4> z;
    for (int i = 0; i < 4; ++i) z[i] = pts[t->order[i]].z;
    const T4Lift l = solve_heights(*t, z);
    bool found = false;
    for (int i = 0; i < 4; ++i)
        if (t->square[i] == P2(-1, 1)) {
            EXPECT_EQ(l.zQ[i], R(-4, 15));
            found = true;
        }
    EXPECT_TRUE(found);
    EXPECT_EQ(l.quadric.str(), "60z + 5xy - 9x - 3y + 15");
}

TEST(SolveHeights, Trivial)
{
    const auto t = *detect_t4(tartar());
    for (const auto& q : solve_heights(t, {0, 0, 0, 0}).zQ) EXPECT_EQ(q, 0);
    for (const auto& q : solve_heights(t, {1, 1, 1, 1}).zQ) EXPECT_EQ(q, 1);
}

TEST(SolveHeights, MatchesOracleAndVanishes)
{
    std::mt19937 rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        const auto t = *detect_t4(random_t4(rng));
        std::array<Rational, 4> z;
        for (auto& v : z) v = random_rational(rng, -3, 3, 5);
        const T4Lift l = solve_heights(t, z);
        EXPECT_EQ(l.zQ, corner_heights_oracle(t, z));
        for (const auto& p : l.lifted_K()) EXPECT_EQ(l.quadric(p), 0);
        for (const auto& p : l.Q()) EXPECT_EQ(l.quadric(p), 0);
        // Q_i = lambda_i K_{i-1} + (1 - lambda_i) Q_{i-1} in all three coordinates.
        const auto k = l.lifted_K();
        const auto q = l.Q();
        for (int i = 0; i < 4; ++i) {
            const int prev = (i + 3) % 4;
            EXPECT_EQ(q[i], t.lambda[i] * k[prev] + (1 - t.lambda[i]) * q[prev]);
        }
    }
}

TEST(SolveHeights, AffineEquivariance)
{
    std::mt19937 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const auto t = *detect_t4(random_t4(rng));
        std::array<Rational, 4> z, w;
        const Rational a = random_rational(rng, -2, 2, 3), b = random_rational(rng, -2, 2, 3),
                       c = random_rational(rng, -2, 2, 3);
        for (int i = 0; i < 4; ++i) {
            z[i] = random_rational(rng, -3, 3, 5);
            w[i] = z[i] + a * t.K[i].x + b * t.K[i].y + c;
        }
        const Quadric q0 = solve_heights(t, z).quadric;
        const Quadric q1 = solve_heights(t, w).quadric;
        EXPECT_EQ(q1.alpha, q0.alpha);
        EXPECT_EQ(q1.beta, q0.beta - a);
        EXPECT_EQ(q1.gamma, q0.gamma - b);
        EXPECT_EQ(q1.delta, q0.delta - c);
    }
}

TEST(SolveHeights, DegenerateAdmitted)
{
    // K_2 sits on the square corner (alpha_2 = 1).
    const std::array<PlanarPoint, 4> k{P2(3, 1), P2(1, -1), P2(-3, -1), P2(-1, 3)};
    const auto t = detect_t4(k);
    ASSERT_TRUE(t);
    EXPECT_TRUE(t->degenerate());
    const T4Lift l = solve_heights(*t, {1, -2, 3, 5});
    for (const auto& p : l.Q()) EXPECT_EQ(l.quadric(p), 0);
}

TEST(FitQuadric, KnownQuadrics)
{
    const auto k = five_points_3d();
    EXPECT_EQ(fit_quadric({k[0], k[1], k[2], k[3]}).str(), "60z + 5xy - 9x - 3y + 15");
    EXPECT_EQ(fit_quadric({k[1], k[2], k[3], k[4]}).str(), "118z - 12xy - 57x - 19y - 36");
    EXPECT_EQ(fit_quadric({k[0], k[3], k[4], TriPoint{-1, 1, R(-4, 15)}}).str(), "45z - 29xy + 26x - 35y + 44");
}

TEST(FitQuadric, Singular)
{
    // Corners of an axis rectangle plus a point on one of its sides.
    EXPECT_THROW(fit_quadric({P3(0, 0, 0), P3(1, 0, 0), P3(2, 0, 1), P3(0, 1, 0)}), SingularFit);
}
