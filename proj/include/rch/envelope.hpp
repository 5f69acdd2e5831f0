#pragma once

// Outer check by the rank-one convex envelope of the squared distance to K,
// discretized on a box grid. Floating point throughout.

#include "rch/detail/lower_hull.hpp"
#include "rch/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <thread>
#include <vector>

namespace rch {

struct Grid3 {
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1, z0 = -1, z1 = 1;
    int nx = 2, ny = 2, nz = 2;
    std::vector<double> f;  // index (i * ny + j) * nz + k

    double hx() const { return (x1 - x0) / (nx - 1); }
    double hy() const { return (y1 - y0) / (ny - 1); }
    double hz() const { return (z1 - z0) / (nz - 1); }
    double spacing() const { return std::max({hx(), hy(), hz()}); }
    double x(int i) const { return x0 + i * hx(); }
    double y(int j) const { return y0 + j * hy(); }
    double z(int k) const { return z0 + k * hz(); }
    std::size_t index(int i, int j, int k) const
    {
        return (static_cast<std::size_t>(i) * ny + j) * nz + k;
    }
    std::size_t size() const { return static_cast<std::size_t>(nx) * ny * nz; }

    /// Bounding box of K times [-M, M]; M defaults to max |z| (1 when K is flat).
    static Grid3 around(const std::vector<TriPoint>& K, int nx, int ny, int nz, std::optional<double> bound = {})
    {
        if (K.empty()) throw Error("grid around an empty set");
        if (nx < 2 || ny < 2 || nz < 2) throw Error("grid resolution must be at least 2 per axis");
        Grid3 g;
        g.nx = nx, g.ny = ny, g.nz = nz;
        g.x0 = g.x1 = K[0].x.get_d();
        g.y0 = g.y1 = K[0].y.get_d();
        double m = 0;
        for (const auto& p : K) {
            g.x0 = std::min(g.x0, p.x.get_d()), g.x1 = std::max(g.x1, p.x.get_d());
            g.y0 = std::min(g.y0, p.y.get_d()), g.y1 = std::max(g.y1, p.y.get_d());
            m = std::max(m, std::fabs(p.z.get_d()));
        }
        if (bound) m = std::max(m, *bound);
        if (m == 0) m = 1;
        if (g.x0 == g.x1) g.x0 -= 1, g.x1 += 1;
        if (g.y0 == g.y1) g.y0 -= 1, g.y1 += 1;
        g.z0 = -m, g.z1 = m;
        g.f.assign(g.size(), 0);
        return g;
    }
};

/// Each node gets the squared distance to the nearest point of K.
inline Grid3 init_distance_field(const std::vector<TriPoint>& K, Grid3 g)
{
    std::vector<std::array<double, 3>> k;
    for (const auto& p : K) k.push_back({p.x.get_d(), p.y.get_d(), p.z.get_d()});
    g.f.assign(g.size(), 0);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j)
            for (int l = 0; l < g.nz; ++l) {
                double best = std::numeric_limits<double>::infinity();
                for (const auto& p : k) {
                    const double dx = g.x(i) - p[0], dy = g.y(j) - p[1], dz = g.z(l) - p[2];
                    best = std::min(best, dx * dx + dy * dy + dz * dz);
                }
                g.f[g.index(i, j, l)] = best;
            }
    return g;
}

struct EnvelopeResult {
    Grid3 field;
    int sweeps = 0;
    double residual = 0;  // max nodewise decrease in the last sweep
    bool converged = false;
};

namespace detail {

template <class Fn>
void parallel_for(int n, int threads, Fn fn)
{
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int t = 0; t < n; ++t) fn(t);
        return;
    }
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&, w] {
            for (int t = w; t < n; t += threads) fn(t);
        });
    for (auto& th : pool) th.join();
}

// Convexifies the {y = const} slices (axis 1) or {x = const} slices (axis 0)
// flagged in dirty; a node lowered here marks the crossing slice of the other
// family in next_dirty.
inline double half_sweep(Grid3& g, int axis, int threads, double ignore, const std::vector<char>& dirty,
                         std::vector<char>& next_dirty)
{
    const int slices = axis == 1 ? g.ny : g.nx;
    const int width = axis == 1 ? g.nx : g.ny;
    std::vector<double> decrease(slices, 0);
    std::vector<std::vector<char>> touched(slices);
    parallel_for(slices, threads, [&](int s) {
        if (!dirty[s]) return;
        std::vector<double> v(static_cast<std::size_t>(width) * g.nz);
        auto at = [&](int w, int k) -> double& {
            return axis == 1 ? g.f[g.index(w, s, k)] : g.f[g.index(s, w, k)];
        };
        for (int w = 0; w < width; ++w)
            for (int k = 0; k < g.nz; ++k) v[static_cast<std::size_t>(w) * g.nz + k] = at(w, k);
        lower_envelope_2d(width, g.nz, v);
        double d = 0;
        touched[s].assign(width, 0);
        for (int w = 0; w < width; ++w)
            for (int k = 0; k < g.nz; ++k) {
                double& cell = at(w, k);
                const double nv = v[static_cast<std::size_t>(w) * g.nz + k];
                if (nv < cell) {
                    d = std::max(d, cell - nv);
                    if (cell - nv > ignore) touched[s][w] = 1;
                    cell = nv;
                }
            }
        decrease[s] = d;
    });
    next_dirty.assign(width, 0);
    for (int s = 0; s < slices; ++s)
        for (std::size_t w = 0; w < touched[s].size(); ++w)
            if (touched[s][w]) next_dirty[w] = 1;
    return *std::max_element(decrease.begin(), decrease.end());
}

}  // namespace detail

/// Alternating slice convexification until the per-sweep decrease drops
/// below tol or max_sweeps is reached. Not converging is reported, not thrown.
inline EnvelopeResult rc_envelope(Grid3 field, double tol = 1e-9, int max_sweeps = 200, int threads = 1)
{
    EnvelopeResult r;
    for (double v : field.f)
        if (!(v >= 0) || !std::isfinite(v)) throw Error("envelope input must be finite and nonnegative");
    r.field = std::move(field);
    // A slice is revisited only if a crossing pass lowered one of its nodes
    // by more than a tenth of tol; skipped slices stay convex to within that.
    const double ignore = tol / 10;
    std::vector<char> dirty_y(r.field.ny, 1), dirty_x;
    for (r.sweeps = 0; r.sweeps < max_sweeps;) {
        const double a = detail::half_sweep(r.field, 1, threads, ignore, dirty_y, dirty_x);
        const double b = detail::half_sweep(r.field, 0, threads, ignore, dirty_x, dirty_y);
        ++r.sweeps;
        r.residual = std::max(a, b);
        if (r.residual < tol) {
            r.converged = true;
            break;
        }
    }
    return r;
}

struct OuterHeight {
    PlanarPoint at;
    std::optional<double> lower;
    std::optional<double> upper;
};

/// Default sublevel threshold: 4 h^2 with h the largest grid spacing.
inline double default_threshold(const Grid3& g)
{
    const double h = g.spacing();
    return 4 * h * h;
}

/// For each planar point, snapped to the nearest node column, the lowest and
/// highest z whose envelope value is at most threshold.
inline std::vector<OuterHeight> outer_heights(const Grid3& env, const std::vector<PlanarPoint>& at,
                                              std::optional<double> threshold = {})
{
    const double thr = threshold ? *threshold : default_threshold(env);
    std::vector<OuterHeight> out;
    for (const auto& p : at) {
        OuterHeight h{p, {}, {}};
        const double px = p.x.get_d(), py = p.y.get_d();
        const double slack = 1e-12;
        if (px >= env.x0 - slack && px <= env.x1 + slack && py >= env.y0 - slack && py <= env.y1 + slack) {
            const int i = std::clamp(static_cast<int>(std::lround((px - env.x0) / env.hx())), 0, env.nx - 1);
            const int j = std::clamp(static_cast<int>(std::lround((py - env.y0) / env.hy())), 0, env.ny - 1);
            for (int k = 0; k < env.nz; ++k)
                if (env.f[env.index(i, j, k)] <= thr) {
                    if (!h.lower) h.lower = env.z(k);
                    h.upper = env.z(k);
                }
        }
        out.push_back(h);
    }
    return out;
}

}  // namespace rch
