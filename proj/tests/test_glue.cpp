#include "rch/glue.hpp"
#include "rch/triangular_hull.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace rch;
using namespace rch::test;

namespace {

RankOnePoly poly(long z, long xy, long x, long y, long c)
{
    return {R(z), R(xy), R(x), R(y), R(c)};
}

const RankOnePoly q1 = poly(60, 5, -9, -3, 15);
const RankOnePoly q2 = poly(45, -29, 26, -35, 44);
const RankOnePoly q3 = poly(118, -12, -57, -19, -36);
const RankOnePoly q4 = poly(118, -143, 205, 112, -298);

PiecewiseQuadric f_lower()
{
    return build_glued_function({{{{0, R(-1), true}, {1, R(1), true}}, R(-1) * q2}, {{}, R(-3, 4) * q1}},
                                {{0, R(-1), 0, 1}, {1, R(1), 0, 1}});
}

PiecewiseQuadric f_upper()
{
    return build_glued_function({{{{0, R(1), true}, {1, R(1), true}}, q4}, {{}, q3}},
                                {{0, R(1), 0, 1}, {1, R(1), 0, 1}});
}

}  // namespace

TEST(Glue, LowerDispatch)
{
    const auto f = f_lower();
    EXPECT_EQ(f.piece_index(R(0), R(1)), 0u);
    EXPECT_EQ(f.piece_index(R(-1), R(2)), 0u);
    EXPECT_EQ(f.piece_index(R(0), R(0)), 1u);
    EXPECT_EQ(f.piece_index(R(-2), R(2)), 1u);
    const TriPoint p = P3(0, 0, 0);
    EXPECT_EQ(f(p), R(-3, 4) * q1(p));
}

TEST(Glue, LowerIsContinuousOnBothPlanes)
{
    const auto f = f_lower();
    for (const auto& g : f.gluing_planes()) EXPECT_TRUE(g.continuous) << g.str();
    EXPECT_TRUE(f.advisory().empty());
    // the identity behind it
    const RankOnePoly d = R(3, 4) * q1 - q2;
    EXPECT_TRUE(d.restrict_x(R(-1)).is_zero());
    EXPECT_TRUE(d.restrict_y(R(1)).is_zero());
    EXPECT_FALSE(d.is_zero());
}

TEST(Glue, UpperMismatchOnHorizontalPlane)
{
    const auto f = f_upper();
    ASSERT_EQ(f.gluing_planes().size(), 2u);
    EXPECT_TRUE(f.gluing_planes()[0].continuous);
    EXPECT_FALSE(f.gluing_planes()[1].continuous);
    ASSERT_EQ(f.advisory().size(), 1u);
    EXPECT_EQ(f.advisory()[0].str(), "y = 1");
    // q3 - q4 = 131 (x - 1)(y - 2)
    const RankOnePoly d = q3 - q4;
    EXPECT_EQ(d, poly(0, 131, -262, -131, 262));
}

TEST(Glue, SinglePieceIsTheQuadric)
{
    const auto f = build_glued_function({{{}, q3}}, {});
    std::mt19937 rng(5);
    for (int t = 0; t < 50; ++t) {
        const TriPoint p{random_rational(rng, -5, 5, 7), random_rational(rng, -5, 5, 7), random_rational(rng, -5, 5, 7)};
        EXPECT_EQ(f(p), q3(p));
    }
}

TEST(Glue, Errors)
{
    EXPECT_THROW(build_glued_function({}, {}), Error);
    EXPECT_THROW(build_glued_function({{{}, q1}}, {{0, R(0), 0, 3}}), Error);
    const auto f = build_glued_function({{{{0, R(0), true}}, q1}}, {});
    EXPECT_THROW(f(P3(-1, 0, 0)), Error);
}

TEST(Glue, SurfacesMatchTheComputedHull)
{
    HullOptions o;
    o.oracle_resolution = 0;
    const auto res = compute_hull(five_points_3d(), o);
    const auto fl = f_lower();
    const auto fu = f_upper();
    std::mt19937 rng(9);
    for (const auto& r : res.desc.rectangles)
        for (int t = 0; t < 25; ++t) {
            const Rational x = r.x0 + (r.x1 - r.x0) * random_rational(rng, 0, 1, 10);
            const Rational y = r.y0 + (r.y1 - r.y0) * random_rational(rng, 0, 1, 10);
            const TriPoint up = lift({x, y}, r.q_upper.height(x, y));
            const TriPoint lo = lift({x, y}, r.q_lower.height(x, y));
            EXPECT_EQ(fu(up), 0);
            EXPECT_EQ(fl(lo), 0);
        }
    // sign separation at the fifth point
    EXPECT_LT(-q1(P3(2, 2, 2)), 0);
    EXPECT_LT(q3(P3(3, 1, 0)), 0);
}
