#include "rch/dplane.hpp"
#include "rch/planar_hull.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace rch;
using namespace rch::test;

namespace {

DirectionCone three_direction_cone()
{
    return DirectionCone({P2(1, 0), P2(0, 1), P2(3, 2)});
}

std::vector<PlanarPoint> three_direction_polygon()
{
    return {P2(1, -1), {R(1), R(-1, 3)}, P2(3, 1), P2(2, 1), P2(2, 2), P2(-1, 2), {R(-1), R(1, 3)}, P2(-3, -1)};
}

Cone<QSqrt3> equilateral()
{
    const QSqrt3 s = QSqrt3::sqrt3();
    return Cone<QSqrt3>({{QSqrt3(1), QSqrt3(0)}, {QSqrt3(1), s}, {QSqrt3(1), QSqrt3(0) - s}});
}

std::vector<Point2<QSqrt3>> parallelogram(const Rational& a)
{
    const QSqrt3 h(0, R(1, 2));
    const QSqrt3 half(R(1, 2));
    return {{0, 0}, {a, 0}, {QSqrt3(a) + half, h}, {half, h}};
}

}  // namespace

TEST(DHull, AxisConeMatchesSeparateHull)
{
    std::mt19937 rng(2024);
    for (int t = 0; t < 100; ++t) {
        const auto pts = random_points(rng, 5 + t % 6, -6, 6);
        EXPECT_EQ(d_hull_2d(pts, DirectionCone::axis()).cells(), separate_hull(pts).cells()) << "case " << t;
    }
    EXPECT_EQ(d_hull_2d(five_points_2d(), DirectionCone::axis()).cells(), separate_hull(five_points_2d()).cells());
    EXPECT_EQ(d_hull_2d(tartar_2d(), DirectionCone::axis()).cells(), separate_hull(tartar_2d()).cells());
}

TEST(DHull, ThreeDirectionRegion)
{
    const auto cells = d_hull_2d(five_points_2d(), three_direction_cone()).cells();
    const auto verts = cells.face_vertices();
    EXPECT_TRUE(verts.count({R(1), R(-1, 3)}));
    EXPECT_TRUE(verts.count({R(-1), R(1, 3)}));
    const auto poly = three_direction_polygon();
    for (const auto& p : poly) EXPECT_TRUE(verts.count(p)) << p;
    for (const auto& p : verts) EXPECT_TRUE(in_polygon(poly, p)) << p;
    Rational area = 0;
    for (const auto& f : cells.faces) area += polygon_area(f);
    EXPECT_EQ(area, polygon_area(poly));
}

TEST(DHull, KeptVerticesAreSupported)
{
    std::mt19937 rng(8);
    const DirectionCone cone = three_direction_cone();
    for (int t = 0; t < 20; ++t) {
        const auto pts = random_points(rng, 5, -4, 4);
        const auto h = d_hull_2d(pts, cone);
        std::vector<PlanarPoint> kept;
        for (std::size_t v = 0; v < h.kept.size(); ++v)
            if (h.kept[v]) kept.push_back(h.grid.vertices[v]);
        for (const auto& v : kept) {
            if (std::find(pts.begin(), pts.end(), v) != pts.end()) continue;
            bool supported = false;
            for (const auto& d : cone.directions()) {
                bool lo = false, hi = false;
                for (const auto& w : kept) {
                    if (cross(w - v, d) != 0) continue;
                    const int s = sgn(dot(w - v, d));
                    lo |= s < 0, hi |= s > 0;
                }
                supported |= lo && hi;
            }
            EXPECT_TRUE(supported) << v;
        }
    }
}

TEST(DGrid, FacesAreEmptyConvexPolygons)
{
    std::mt19937 rng(31);
    for (int t = 0; t < 10; ++t) {
        const auto g = build_dgrid(random_points(rng, 5, -4, 4), three_direction_cone());
        for (const auto& f : g.faces) {
            std::vector<PlanarPoint> poly;
            for (auto v : f) poly.push_back(g.vertices[v]);
            ASSERT_GE(poly.size(), 3u);
            for (std::size_t i = 0; i < poly.size(); ++i) {
                const auto& a = poly[i];
                const auto& b = poly[(i + 1) % poly.size()];
                const auto& c = poly[(i + 2) % poly.size()];
                EXPECT_GT(cross(b - a, c - b), 0);
            }
            for (const auto& p : g.vertices) {
                if (std::find(poly.begin(), poly.end(), p) != poly.end()) continue;
                EXPECT_FALSE(in_polygon(poly, p));
            }
        }
    }
}

TEST(DHull, GenericTripleStaysPut)
{
    // not a T3 for this cone (a generic triple usually is one)
    const std::vector<PlanarPoint> pts{P2(0, 0), P2(-3, -1), P2(1, -3)};
    ASSERT_FALSE(detect_t3<Rational>({pts[0], pts[1], pts[2]}, three_direction_cone()));
    const auto cells = d_hull_2d(pts, three_direction_cone()).cells();
    EXPECT_EQ(cells.vertices.size(), 3u);
    EXPECT_TRUE(cells.edges.empty());
    EXPECT_TRUE(cells.faces.empty());
}

TEST(DHull, DoubleFieldAgreesOnThreeDirections)
{
    std::vector<Point2<double>> pts;
    for (const auto& p : five_points_2d()) pts.push_back({p.x.get_d(), p.y.get_d()});
    const Cone<double> cone({{1.0, 0.0}, {0.0, 1.0}, {3.0, 2.0}});
    const auto d = d_hull_2d(pts, cone).cells();
    const auto r = d_hull_2d(five_points_2d(), three_direction_cone()).cells();
    EXPECT_EQ(d.faces.size(), r.faces.size());
    EXPECT_EQ(d.vertices.size(), r.vertices.size());
    EXPECT_TRUE(d.contains({1.0, -1.0 / 3}));
}

TEST(DetectT3, ForwardConstructed)
{
    const Cone<Rational> cone({P2(1, 0), P2(0, 1), P2(1, 1)});
    const auto t = detect_t3<Rational>({P2(2, 0), P2(1, 2), P2(-1, -1)}, cone);
    ASSERT_TRUE(t);
    EXPECT_EQ(t->P, P2(0, 0));
    EXPECT_EQ(t->C[0], P2(1, 0));
    EXPECT_EQ(t->C[1], P2(0, 1));
    EXPECT_EQ(t->C[2], P2(-1, -1));
    for (const auto& a : t->alpha) EXPECT_EQ(a, 2);
}

TEST(DetectT3, RandomAndPermutations)
{
    std::mt19937 rng(4);
    const Cone<Rational> cone({P2(1, 0), P2(0, 1), P2(1, 1), P2(1, -2)});
    for (int n = 0; n < 40; ++n) {
        // legs along three distinct directions closing up
        std::array<std::size_t, 3> dir{0, 1, 2};
        if (n % 2) dir = {1, 3, 0};
        const auto& d = cone.directions();
        const Point2<Rational> c1 = cross(d[dir[1]], d[dir[2]]) * d[dir[0]];
        const Point2<Rational> c2 = cross(d[dir[2]], d[dir[0]]) * d[dir[1]];
        const Point2<Rational> c3 = cross(d[dir[0]], d[dir[1]]) * d[dir[2]];
        const Rational s = random_rational(rng, 1, 3, 2) * (n % 3 ? 1 : -1);
        const PlanarPoint p{random_rational(rng, -3, 3, 2), random_rational(rng, -3, 3, 2)};
        std::array<Rational, 3> alpha;
        for (auto& a : alpha) a = 1 + random_rational(rng, 0, 2, 3);
        const std::array<PlanarPoint, 3> K{p + (alpha[0] * s) * c1, p + s * c1 + (alpha[1] * s) * c2,
                                           p + s * c1 + s * c2 + (alpha[2] * s) * c3};
        std::array<int, 3> perm{0, 1, 2};
        do {
            const auto t = detect_t3<Rational>({K[perm[0]], K[perm[1]], K[perm[2]]}, cone);
            ASSERT_TRUE(t);
            Point2<Rational> corner = t->P;
            for (int i = 0; i < 3; ++i) {
                EXPECT_EQ(t->K[i], corner + t->alpha[i] * t->C[i]);
                EXPECT_GE(t->alpha[i], 1);
                corner = corner + t->C[i];
            }
            EXPECT_EQ(corner, t->P);
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
}

TEST(DetectT3, Rejects)
{
    const Cone<Rational> cone({P2(1, 0), P2(0, 1), P2(1, 1)});
    EXPECT_FALSE(detect_t3<Rational>({P2(0, 0), P2(1, 1), P2(2, 2)}, cone));
    EXPECT_FALSE(detect_t3<Rational>({P2(0, 0), P2(-3, -1), P2(1, -3)}, cone));
    EXPECT_THROW(detect_t3<Rational>({P2(2, 0), P2(1, 2), P2(-1, -1)}, DirectionCone::axis()), Error);
}

TEST(T3Hull, PlaneAndInnerTriangle)
{
    const DirectionCone cone({P2(1, 0), P2(0, 1), P2(1, 1)});
    const auto flat = t3_hull_3d({P3(2, 0, 0), P3(1, 2, 0), P3(-1, -1, 0)}, cone);
    EXPECT_EQ(flat.u, 0);
    EXPECT_EQ(flat.v, 0);
    EXPECT_EQ(flat.w, 0);

    const std::array<TriPoint, 3> K{P3(2, 0, 0), P3(1, 2, 0), P3(-1, -1, 3)};
    const auto h = t3_hull_3d(K, cone);
    for (const auto& k : K) {
        EXPECT_EQ(h.height(project(k)), k.z);
        EXPECT_TRUE(h.contains(k));
    }
    for (const auto& p : h.t3.inner()) EXPECT_TRUE(h.contains(lift(p, h.height(p)))) << p;
    const PlanarPoint centre = R(1, 3) * (h.t3.inner()[0] + h.t3.inner()[1] + h.t3.inner()[2]);
    EXPECT_TRUE(h.contains(lift(centre, h.height(centre))));
    EXPECT_FALSE(h.contains(lift(centre, h.height(centre) + 1)));
    // the plane is affine along every leg: heights at K_i, corner and corner + C_i are collinear
    Point2<Rational> corner = h.t3.P;
    for (int i = 0; i < 3; ++i) {
        const auto next = corner + h.t3.C[i];
        const Rational a = h.t3.alpha[i];
        EXPECT_EQ(h.height(h.t3.K[i]), h.height(corner) + a * (h.height(next) - h.height(corner)));
        corner = next;
    }
    EXPECT_THROW(t3_hull_3d({P3(0, 0, 0), P3(1, 1, 0), P3(2, 2, 1)}, cone), Error);
}

TEST(RefineGrid, UnitSquareClosesAtOnce)
{
    const auto r = refine_grid(std::vector<PlanarPoint>{P2(0, 0), P2(1, 0), P2(1, 1), P2(0, 1)}, DirectionCone::axis(), 5);
    EXPECT_TRUE(r.terminated);
    EXPECT_EQ(r.rounds, 1);
    EXPECT_THROW(refine_grid(std::vector<PlanarPoint>{P2(0, 0)}, DirectionCone::axis(), 0), Error);
}

TEST(RefineGrid, RationalParallelogramTerminates)
{
    const auto r = refine_grid(parallelogram(R(2)), equilateral(), 25);
    EXPECT_TRUE(r.terminated);
    for (std::size_t i = 1; i < r.vertex_counts.size(); ++i) EXPECT_GE(r.vertex_counts[i], r.vertex_counts[i - 1]);
}

TEST(RefineGrid, IrrationalRatioGrows)
{
    const auto r = refine_grid(parallelogram(from_double(std::sqrt(2.0))), equilateral(), 6);
    EXPECT_FALSE(r.terminated);
    EXPECT_EQ(r.rounds, 6);
    for (std::size_t i = 1; i < r.vertex_counts.size(); ++i) EXPECT_GT(r.vertex_counts[i], r.vertex_counts[i - 1]);
}

TEST(RefineGrid, BudgetStopsEarly)
{
    const auto r = refine_grid(parallelogram(from_double(std::sqrt(2.0))), equilateral(), 25, 100);
    EXPECT_FALSE(r.terminated);
    EXPECT_TRUE(r.budget_exhausted);
    EXPECT_LT(r.rounds, 25);
}
