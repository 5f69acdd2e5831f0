#include "rch/envelope.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace rch;
using namespace rch::test;

namespace {

// Convex envelope of finitely many samples at a node: minimum over all
// points, segments and triangles of samples whose hull contains the node.
std::vector<double> brute_envelope(int nx, int ny, const std::vector<double>& v)
{
    const int n = nx * ny;
    std::vector<double> out(v);
    auto X = [&](int t) { return t / ny; };
    auto Y = [&](int t) { return t % ny; };
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = b; c < n; ++c) {
                const long det = static_cast<long>(X(b) - X(a)) * (Y(c) - Y(a)) - static_cast<long>(Y(b) - Y(a)) * (X(c) - X(a));
                for (int p = 0; p < n; ++p) {
                    if (det != 0) {
                        const long d1 = static_cast<long>(X(b) - X(p)) * (Y(c) - Y(p)) - static_cast<long>(Y(b) - Y(p)) * (X(c) - X(p));
                        const long d2 = static_cast<long>(X(c) - X(p)) * (Y(a) - Y(p)) - static_cast<long>(Y(c) - Y(p)) * (X(a) - X(p));
                        const long d3 = det - d1 - d2;
                        if ((det > 0 && (d1 < 0 || d2 < 0 || d3 < 0)) || (det < 0 && (d1 > 0 || d2 > 0 || d3 > 0)))
                            continue;
                        const double val = (d1 * v[a] + d2 * v[b] + d3 * v[c]) / static_cast<double>(det);
                        out[p] = std::min(out[p], val);
                    } else if (c == b) {
                        // segment a-b
                        const long cr = static_cast<long>(X(b) - X(a)) * (Y(p) - Y(a)) - static_cast<long>(Y(b) - Y(a)) * (X(p) - X(a));
                        if (cr != 0) continue;
                        const long dt = static_cast<long>(X(p) - X(a)) * (X(b) - X(a)) + static_cast<long>(Y(p) - Y(a)) * (Y(b) - Y(a));
                        const long len = static_cast<long>(X(b) - X(a)) * (X(b) - X(a)) + static_cast<long>(Y(b) - Y(a)) * (Y(b) - Y(a));
                        if (dt < 0 || dt > len) continue;
                        const double t = static_cast<double>(dt) / len;
                        out[p] = std::min(out[p], (1 - t) * v[a] + t * v[b]);
                    }
                }
            }
    return out;
}

}  // namespace

TEST(LowerEnvelope2d, MatchesBruteForce)
{
    std::mt19937 rng(21);
    for (int trial = 0; trial < 60; ++trial) {
        const int nx = 2 + static_cast<int>(rng() % 6), ny = 2 + static_cast<int>(rng() % 6);
        std::vector<double> v(static_cast<std::size_t>(nx) * ny);
        const int mode = trial % 3;
        for (int i = 0; i < nx; ++i)
            for (int k = 0; k < ny; ++k) {
                double& x = v[static_cast<std::size_t>(i) * ny + k];
                if (mode == 0)
                    x = std::uniform_real_distribution<double>(0, 10)(rng);
                else if (mode == 1)
                    x = static_cast<double>(rng() % 3);  // many ties and coplanar points
                else
                    x = (i - 2.0) * (i - 2.0) + 0.5 * k + (rng() % 4 == 0 ? 3.0 : 0.0);
            }
        const auto expect = brute_envelope(nx, ny, v);
        auto got = v;
        detail::lower_envelope_2d(nx, ny, got);
        for (std::size_t t = 0; t < v.size(); ++t) EXPECT_NEAR(got[t], expect[t], 1e-9) << trial << " " << t;
    }
}

TEST(LowerEnvelope2d, TentFlattens)
{
    std::vector<double> v{0, 0, 1, 1, 0, 0};  // 3 x 2, middle row raised
    detail::lower_envelope_2d(3, 2, v);
    for (double x : v) EXPECT_DOUBLE_EQ(x, 0);
}

TEST(DistanceField, Examples)
{
    Grid3 g = Grid3::around({P3(0, 0, 0), P3(2, 2, 2)}, 3, 3, 3);
    g = init_distance_field({P3(0, 0, 0)}, g);
    // nodes are at -2, 0, 2 in z and 0, 1, 2 in x, y
    EXPECT_DOUBLE_EQ(g.f[g.index(0, 0, 1)], 0);
    EXPECT_DOUBLE_EQ(g.f[g.index(1, 0, 1)], 1);

    const auto K = five_points_3d();
    Grid3 h = Grid3::around(K, 7, 7, 5);  // integer nodes in x, y; z in {-2,-1,0,1,2}
    h = init_distance_field(K, h);
    double brute = 1e9;
    for (const auto& k : K) brute = std::min(brute, squared_distance(P3(0, 0, 0), k).get_d());
    EXPECT_DOUBLE_EQ(h.f[h.index(3, 3, 2)], brute);
    EXPECT_DOUBLE_EQ(brute, 10);
    EXPECT_DOUBLE_EQ(h.f[h.index(5, 5, 4)], 0);  // K5 = (2,2,2)
}

TEST(RcEnvelope, ConvexFieldUnchanged)
{
    Grid3 g = Grid3::around({P3(-2, -2, -2), P3(2, 2, 2)}, 9, 9, 9);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j)
            for (int k = 0; k < g.nz; ++k)
                g.f[g.index(i, j, k)] = 1 + g.x(i) * g.x(i) + 0.5 * g.y(j) * g.y(j) + g.z(k) * g.z(k) + g.x(i) * g.z(k) * 0.3;
    const EnvelopeResult r = rc_envelope(g, 1e-9, 5);
    EXPECT_TRUE(r.converged);
    for (std::size_t t = 0; t < g.size(); ++t) EXPECT_NEAR(r.field.f[t], g.f[t], 1e-9);
}

TEST(RcEnvelope, TartarCornerGoesToZero)
{
    const auto K = tartar_flat_3d();
    Grid3 g = init_distance_field(K, Grid3::around(K, 7, 7, 5));
    const EnvelopeResult r = rc_envelope(g, 1e-12, 60);
    // node (-1, 1, 0)
    EXPECT_LT(r.field.f[r.field.index(2, 4, 2)], 1e-9);
    // laminate value after s splits is 4 * 2^-s; the envelope is below it
    EXPECT_LE(r.field.f[r.field.index(2, 4, 2)], 4.0 / 1024);
    // Outside the hull the value stays positive.
    EXPECT_GT(r.field.f[r.field.index(6, 6, 2)], 1);
}

TEST(RcEnvelope, Properties)
{
    const auto K = five_points_3d();
    Grid3 g = init_distance_field(K, Grid3::around(K, 13, 13, 9));
    const Grid3 start = g;
    Grid3 prev = g;
    for (int s = 0; s < 4; ++s) {
        const EnvelopeResult r = rc_envelope(prev, 1e-9, 1);
        for (std::size_t t = 0; t < g.size(); ++t) {
            EXPECT_LE(r.field.f[t], prev.f[t] + 1e-12);
            EXPECT_GE(r.field.f[t], -1e-12);
        }
        prev = r.field;
    }
    const EnvelopeResult r = rc_envelope(start, 1e-10, 300);
    const Grid3& e = r.field;
    // Slice convexity: midpoints of collinear node triples inside each slice.
    for (int i = 0; i + 2 < e.nx; ++i)
        for (int j = 0; j < e.ny; ++j)
            for (int k = 0; k + 2 < e.nz; ++k) {
                EXPECT_LE(e.f[e.index(i + 1, j, k + 1)], 0.5 * (e.f[e.index(i, j, k)] + e.f[e.index(i + 2, j, k + 2)]) + 1e-6);
                EXPECT_LE(e.f[e.index(j % e.nx, i + 1, k + 1)],
                          0.5 * (e.f[e.index(j % e.nx, i, k + 2)] + e.f[e.index(j % e.nx, i + 2, k)]) + 1e-6);
            }
    for (const auto& k : K) {
        const auto h = outer_heights(e, {project(k)});
        ASSERT_TRUE(h[0].upper);
    }
    EXPECT_FALSE(outer_heights(e, {P2(10, 10)})[0].upper);
}
