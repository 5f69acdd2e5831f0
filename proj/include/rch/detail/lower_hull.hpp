#pragma once

// Lower convex envelope of a function sampled on a regular 2D grid, via an
// exact 3D convex hull of the (i, k, value) points. Values are quantized to
// a power-of-two fixed point first so that every orientation test is an
// exact 128-bit integer determinant.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace rch::detail {

using i128 = __int128;

struct HPoint {
    std::int64_t x, y, f;
};

inline i128 orient3d(const HPoint& a, const HPoint& b, const HPoint& c, const HPoint& p)
{
    const i128 bx = b.x - a.x, by = b.y - a.y, bf = b.f - a.f;
    const i128 cx = c.x - a.x, cy = c.y - a.y, cf = c.f - a.f;
    const i128 px = p.x - a.x, py = p.y - a.y, pf = p.f - a.f;
    const i128 nx = by * cf - bf * cy;
    const i128 ny = bf * cx - bx * cf;
    const i128 nf = bx * cy - by * cx;
    return nx * px + ny * py + nf * pf;
}

// Sign of orient3d with a floating-point filter; exact fallback.
inline int orient3d_sign(const HPoint& a, const HPoint& b, const HPoint& c, const HPoint& p)
{
    const double bx = static_cast<double>(b.x - a.x), by = static_cast<double>(b.y - a.y),
                 bf = static_cast<double>(b.f - a.f);
    const double cx = static_cast<double>(c.x - a.x), cy = static_cast<double>(c.y - a.y),
                 cf = static_cast<double>(c.f - a.f);
    const double px = static_cast<double>(p.x - a.x), py = static_cast<double>(p.y - a.y),
                 pf = static_cast<double>(p.f - a.f);
    const double t1 = by * cf, t2 = bf * cy, t3 = bf * cx, t4 = bx * cf, t5 = bx * cy, t6 = by * cx;
    const double det = (t1 - t2) * px + (t3 - t4) * py + (t5 - t6) * pf;
    const double perm = (std::fabs(t1) + std::fabs(t2)) * std::fabs(px) + (std::fabs(t3) + std::fabs(t4)) * std::fabs(py) +
                        (std::fabs(t5) + std::fabs(t6)) * std::fabs(pf);
    const double bound = 1e-14 * perm;  // differences of 53-bit integers are exact
    if (det > bound) return 1;
    if (det < -bound) return -1;
    const i128 e = orient3d(a, b, c, p);
    return e > 0 ? 1 : (e < 0 ? -1 : 0);
}

inline double orient3d_approx(const HPoint& a, const HPoint& b, const HPoint& c, const HPoint& p)
{
    const double bx = static_cast<double>(b.x - a.x), by = static_cast<double>(b.y - a.y),
                 bf = static_cast<double>(b.f - a.f);
    const double cx = static_cast<double>(c.x - a.x), cy = static_cast<double>(c.y - a.y),
                 cf = static_cast<double>(c.f - a.f);
    return (by * cf - bf * cy) * static_cast<double>(p.x - a.x) + (bf * cx - bx * cf) * static_cast<double>(p.y - a.y) +
           (bx * cy - by * cx) * static_cast<double>(p.f - a.f);
}

// Indices of the strict vertices of the lower convex chain of (t, v[t]).
inline void lower_chain(const std::vector<std::int64_t>& v, std::vector<int>& out)
{
    out.clear();
    for (int t = 0; t < static_cast<int>(v.size()); ++t) {
        while (out.size() >= 2) {
            const int a = out[out.size() - 2], b = out.back();
            // drop b unless it lies strictly below segment a..t
            const i128 lhs = static_cast<i128>(v[b] - v[a]) * (t - a);
            const i128 rhs = static_cast<i128>(v[t] - v[a]) * (b - a);
            if (lhs >= rhs)
                out.pop_back();
            else
                break;
        }
        out.push_back(t);
    }
}

class Quickhull {
public:
    struct Face {
        int v[3];
        int nb[3];  // neighbor across edge v[e] -> v[e+1]
        std::vector<int> outside;
        bool dead = false;
    };

    explicit Quickhull(const std::vector<HPoint>& pts) : p_(pts), start_of_(pts.size(), -1), end_of_(pts.size(), -1) {}

    // False when all points are coplanar.
    bool run()
    {
        faces_.reserve(8 * p_.size() + 16);
        if (!initial()) return false;
        std::vector<int> stack;
        for (int f = 0; f < static_cast<int>(faces_.size()); ++f) stack.push_back(f);
        std::vector<int> visible, horizon_face, horizon_edge;
        std::vector<long> mark;  // 2*round: visible, 2*round+1: tested invisible
        long round = 0;
        while (!stack.empty()) {
            const int f0 = stack.back();
            stack.pop_back();
            if (faces_[f0].dead || faces_[f0].outside.empty()) continue;
            // farthest outside point of f0
            int best = -1;
            double best_o = 0;
            for (int q : faces_[f0].outside) {
                const Face& F = faces_[f0];
                const double o = orient3d_approx(p_[F.v[0]], p_[F.v[1]], p_[F.v[2]], p_[q]);
                if (best < 0 || o > best_o) best = q, best_o = o;
            }
            const int p = best;

            visible.clear();
            horizon_face.clear();
            horizon_edge.clear();
            ++round;
            mark.resize(faces_.size(), 0);
            visible.push_back(f0);
            mark[f0] = 2 * round;
            for (std::size_t s = 0; s < visible.size(); ++s) {
                const int f = visible[s];
                for (int e = 0; e < 3; ++e) {
                    const int g = faces_[f].nb[e];
                    if (mark[g] == 2 * round) continue;
                    if (mark[g] != 2 * round + 1 && orient(g, p) > 0) {
                        mark[g] = 2 * round;
                        visible.push_back(g);
                    } else {
                        mark[g] = 2 * round + 1;
                        horizon_face.push_back(f);
                        horizon_edge.push_back(e);
                    }
                }
            }
            std::vector<int> created;
            for (std::size_t h = 0; h < horizon_face.size(); ++h) {
                const Face& vf = faces_[horizon_face[h]];
                const int e = horizon_edge[h];
                const int u = vf.v[e], w = vf.v[(e + 1) % 3];
                const int out_nb = vf.nb[e];
                const int nf = static_cast<int>(faces_.size());
                faces_.push_back(Face{{u, w, p}, {out_nb, -1, -1}, {}, false});
                Face& g = faces_[out_nb];
                for (int k = 0; k < 3; ++k)
                    if (g.v[k] == w && g.v[(k + 1) % 3] == u) g.nb[k] = nf;
                start_of_[u] = nf;
                end_of_[w] = nf;
                created.push_back(nf);
            }
            for (int nf : created) {
                Face& f = faces_[nf];
                f.nb[1] = start_of_[f.v[1]];  // across w -> p
                f.nb[2] = end_of_[f.v[0]];    // across p -> u
            }
            for (int nf : created) start_of_[faces_[nf].v[0]] = end_of_[faces_[nf].v[1]] = -1;
            for (int f : visible) {
                faces_[f].dead = true;
                for (int q : faces_[f].outside) {
                    if (q == p) continue;
                    for (int nf : created)
                        if (orient(nf, q) > 0) {
                            faces_[nf].outside.push_back(q);
                            break;
                        }
                }
                faces_[f].outside.clear();
                faces_[f].outside.shrink_to_fit();
            }
            for (int nf : created)
                if (!faces_[nf].outside.empty()) stack.push_back(nf);
        }
        return true;
    }

    const std::vector<Face>& faces() const { return faces_; }
    const HPoint& point(int i) const { return p_[i]; }

private:
    int orient(int f, int q) const
    {
        const Face& F = faces_[f];
        return orient3d_sign(p_[F.v[0]], p_[F.v[1]], p_[F.v[2]], p_[q]);
    }

    bool initial()
    {
        const int n = static_cast<int>(p_.size());
        if (n < 4) return false;
        int a = 0, b = -1, c = -1, d = -1;
        for (int i = 1; i < n && b < 0; ++i)
            if (p_[i].x != p_[a].x || p_[i].y != p_[a].y || p_[i].f != p_[a].f) b = i;
        if (b < 0) return false;
        // c: not collinear with a, b (largest cross product norm)
        double best = 0;
        for (int i = 0; i < n; ++i) {
            const i128 ux = p_[b].x - p_[a].x, uy = p_[b].y - p_[a].y, uf = p_[b].f - p_[a].f;
            const i128 vx = p_[i].x - p_[a].x, vy = p_[i].y - p_[a].y, vf = p_[i].f - p_[a].f;
            const i128 cx = uy * vf - uf * vy, cy = uf * vx - ux * vf, cz = ux * vy - uy * vx;
            if (cx == 0 && cy == 0 && cz == 0) continue;
            const double m = std::fabs(static_cast<double>(cx)) + std::fabs(static_cast<double>(cy)) +
                             std::fabs(static_cast<double>(cz));
            if (c < 0 || m > best) c = i, best = m;
        }
        if (c < 0) return false;
        best = 0;
        for (int i = 0; i < n; ++i) {
            const i128 o = orient3d(p_[a], p_[b], p_[c], p_[i]);
            if (o == 0) continue;
            const double m = std::fabs(static_cast<double>(o));
            if (d < 0 || m > best) d = i, best = m;
        }
        if (d < 0) return false;
        if (orient3d(p_[a], p_[b], p_[c], p_[d]) > 0) std::swap(b, c);
        // outward faces of tetrahedron (a,b,c,d) with orient(abc, d) < 0
        faces_.push_back(Face{{a, b, c}, {-1, -1, -1}, {}, false});
        faces_.push_back(Face{{a, d, b}, {-1, -1, -1}, {}, false});
        faces_.push_back(Face{{b, d, c}, {-1, -1, -1}, {}, false});
        faces_.push_back(Face{{c, d, a}, {-1, -1, -1}, {}, false});
        for (int f = 0; f < 4; ++f)
            for (int e = 0; e < 3; ++e) {
                const int u = faces_[f].v[e], w = faces_[f].v[(e + 1) % 3];
                for (int g = 0; g < 4; ++g)
                    for (int k = 0; k < 3; ++k)
                        if (faces_[g].v[k] == w && faces_[g].v[(k + 1) % 3] == u) faces_[f].nb[e] = g;
            }
        for (int i = 0; i < n; ++i) {
            if (i == a || i == b || i == c || i == d) continue;
            for (int f = 0; f < 4; ++f)
                if (orient(f, i) > 0) {
                    faces_[f].outside.push_back(i);
                    break;
                }
        }
        return true;
    }

    std::vector<HPoint> p_;
    std::vector<Face> faces_;
    std::vector<int> start_of_;
    std::vector<int> end_of_;
};

/// Replaces vals (row-major, index i * ny + k) by its lower convex envelope
/// over the grid {0..nx-1} x {0..ny-1}. The result never exceeds the input.
inline void lower_envelope_2d(int nx, int ny, std::vector<double>& vals)
{
    double m = 0;
    for (double v : vals) m = std::max(m, std::fabs(v));
    if (m == 0 || nx < 2 || ny < 2) return;
    int e = 0;
    std::frexp(m, &e);
    const double scale = std::ldexp(1.0, 52 - e);  // |quantized| < 2^52
    std::vector<std::int64_t> q(vals.size());
    for (std::size_t t = 0; t < vals.size(); ++t) q[t] = std::llround(vals[t] * scale);

    // Keep only points that are strict vertices of both 1D lower chains.
    std::vector<char> keep_row(vals.size(), 0), keep_col(vals.size(), 0);
    std::vector<std::int64_t> line;
    std::vector<int> chain;
    for (int i = 0; i < nx; ++i) {
        line.assign(q.begin() + static_cast<long>(i) * ny, q.begin() + static_cast<long>(i + 1) * ny);
        lower_chain(line, chain);
        for (int k : chain) keep_row[static_cast<std::size_t>(i) * ny + k] = 1;
    }
    for (int k = 0; k < ny; ++k) {
        line.resize(nx);
        for (int i = 0; i < nx; ++i) line[i] = q[static_cast<std::size_t>(i) * ny + k];
        lower_chain(line, chain);
        for (int i : chain) keep_col[static_cast<std::size_t>(i) * ny + k] = 1;
    }
    std::vector<HPoint> pts;
    for (int i = 0; i < nx; ++i)
        for (int k = 0; k < ny; ++k) {
            const std::size_t t = static_cast<std::size_t>(i) * ny + k;
            if (keep_row[t] && keep_col[t]) pts.push_back({i, k, q[t]});
        }

    std::vector<double> out(vals.size(), std::numeric_limits<double>::infinity());
    auto raster = [&](const HPoint& a, const HPoint& b, const HPoint& c) {
        const i128 bx = b.x - a.x, by = b.y - a.y, bf = b.f - a.f;
        const i128 cx = c.x - a.x, cy = c.y - a.y, cf = c.f - a.f;
        const long double nxp = static_cast<long double>(by * cf - bf * cy);
        const long double nyp = static_cast<long double>(bf * cx - bx * cf);
        const i128 nf = bx * cy - by * cx;
        if (nf == 0) return;
        const long double nfl = static_cast<long double>(nf);
        const std::int64_t lo_i = std::min({a.x, b.x, c.x}), hi_i = std::max({a.x, b.x, c.x});
        const std::int64_t lo_k = std::min({a.y, b.y, c.y}), hi_k = std::max({a.y, b.y, c.y});
        const int sgn = nf > 0 ? 1 : -1;
        auto edge = [](const HPoint& u, const HPoint& w, std::int64_t i, std::int64_t k) {
            return (w.x - u.x) * (k - u.y) - (w.y - u.y) * (i - u.x);
        };
        for (std::int64_t i = lo_i; i <= hi_i; ++i)
            for (std::int64_t k = lo_k; k <= hi_k; ++k) {
                if (sgn * edge(a, b, i, k) < 0 || sgn * edge(b, c, i, k) < 0 || sgn * edge(c, a, i, k) < 0) continue;
                const long double f =
                    static_cast<long double>(a.f) - (nxp * (i - a.x) + nyp * (k - a.y)) / nfl;
                double& o = out[static_cast<std::size_t>(i) * ny + k];
                o = std::min(o, static_cast<double>(f / scale));
            }
    };

    // An apex far above the middle turns every upper face into a cone face,
    // so only the lower hull is built.
    const std::size_t real = pts.size();
    pts.push_back({(nx - 1) / 2, (ny - 1) / 2, std::int64_t(1) << 60});
    Quickhull hull(pts);
    if (hull.run()) {
        for (const auto& f : hull.faces()) {
            if (f.dead) continue;
            if (static_cast<std::size_t>(f.v[0]) == real || static_cast<std::size_t>(f.v[1]) == real ||
                static_cast<std::size_t>(f.v[2]) == real)
                continue;
            const HPoint &a = hull.point(f.v[0]), &b = hull.point(f.v[1]), &c = hull.point(f.v[2]);
            const i128 nf = static_cast<i128>(b.x - a.x) * (c.y - a.y) - static_cast<i128>(b.y - a.y) * (c.x - a.x);
            if (nf < 0) raster(a, b, c);  // outward normal points down
        }
    } else {
        // Coplanar: a single plane through three non-collinear points.
        const HPoint* tri[3] = {&pts[0], nullptr, nullptr};
        for (const auto& p : pts) {
            if (!tri[1]) {
                if (p.x != tri[0]->x || p.y != tri[0]->y) tri[1] = &p;
            } else if ((tri[1]->x - tri[0]->x) * (p.y - tri[0]->y) - (tri[1]->y - tri[0]->y) * (p.x - tri[0]->x) != 0) {
                tri[2] = &p;
                break;
            }
        }
        if (!tri[2]) return;
        // Evaluate the plane everywhere through a covering triangle pair.
        const HPoint &a = *tri[0], &b = *tri[1], &c = *tri[2];
        const i128 bx = b.x - a.x, by = b.y - a.y, bf = b.f - a.f;
        const i128 cx = c.x - a.x, cy = c.y - a.y, cf = c.f - a.f;
        const long double nxp = static_cast<long double>(by * cf - bf * cy);
        const long double nyp = static_cast<long double>(bf * cx - bx * cf);
        const long double nfl = static_cast<long double>(bx * cy - by * cx);
        for (int i = 0; i < nx; ++i)
            for (int k = 0; k < ny; ++k)
                out[static_cast<std::size_t>(i) * ny + k] =
                    static_cast<double>((static_cast<long double>(a.f) - (nxp * (i - a.x) + nyp * (k - a.y)) / nfl) / scale);
    }
    for (std::size_t t = 0; t < vals.size(); ++t) vals[t] = std::min(vals[t], out[t]);
}

}  // namespace rch::detail
