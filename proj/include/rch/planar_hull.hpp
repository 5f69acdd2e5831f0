#pragma once

#include "rch/cells.hpp"
#include "rch/cone.hpp"
#include "rch/geometry.hpp"

#include <algorithm>
#include <optional>
#include <vector>

namespace rch {

class EmptyInput : public Error {
public:
    EmptyInput() : Error("empty input point set") {}
};

/// Grid of a finite planar set for the two-axis cone: the vertical and
/// horizontal lines through every input point, restricted to the bounding box.
///
/// Vertex (i, j) sits at (xs[i], ys[j]); its id is i * ys.size() + j.
struct PlanarGrid {
    struct Line {
        int direction;  // index into the cone: 0 = (1,0), 1 = (0,1)
        Rational offset;  // y for horizontal lines, x for vertical lines
    };

    std::vector<PlanarPoint> points;  // deduplicated input
    std::vector<Rational> xs;
    std::vector<Rational> ys;
    std::vector<bool> is_input;  // per vertex id

    std::size_t nx() const { return xs.size(); }
    std::size_t ny() const { return ys.size(); }
    std::size_t vertex_count() const { return nx() * ny(); }
    std::size_t id(std::size_t i, std::size_t j) const { return i * ny() + j; }
    PlanarPoint vertex(std::size_t i, std::size_t j) const { return {xs[i], ys[j]}; }
    PlanarPoint vertex(std::size_t id) const { return vertex(id / ny(), id % ny()); }

    std::vector<Line> lines() const
    {
        std::vector<Line> out;
        for (const auto& y : ys) out.push_back({0, y});
        for (const auto& x : xs) out.push_back({1, x});
        return out;
    }

    std::size_t edge_count() const { return (nx() - 1) * ny() + nx() * (ny() - 1); }
    std::size_t face_count() const { return (nx() - 1) * (ny() - 1); }

    std::optional<std::size_t> x_index(const Rational& x) const
    {
        auto it = std::lower_bound(xs.begin(), xs.end(), x);
        if (it == xs.end() || *it != x) return std::nullopt;
        return static_cast<std::size_t>(it - xs.begin());
    }
    std::optional<std::size_t> y_index(const Rational& y) const
    {
        auto it = std::lower_bound(ys.begin(), ys.end(), y);
        if (it == ys.end() || *it != y) return std::nullopt;
        return static_cast<std::size_t>(it - ys.begin());
    }
};

inline PlanarGrid build_grid(const std::vector<PlanarPoint>& points, const DirectionCone& cone = DirectionCone::axis())
{
    if (points.empty()) throw EmptyInput();
    if (cone.size() < 2) throw Error("cone needs at least two directions");
    if (!cone.is_axis()) throw Error("planar grid supports the two-axis cone only; use dplane for other cones");

    PlanarGrid g;
    g.points = unique_sorted(points);
    for (const auto& p : g.points) {
        g.xs.push_back(p.x);
        g.ys.push_back(p.y);
    }
    g.xs = unique_sorted(g.xs);
    g.ys = unique_sorted(g.ys);
    g.is_input.assign(g.vertex_count(), false);
    for (const auto& p : g.points) g.is_input[g.id(*g.x_index(p.x), *g.y_index(p.y))] = true;
    return g;
}

/// Kept cells of a grid: the set B_i of the pruning iteration.
struct FaceUnion {
    std::vector<bool> kept;  // per grid vertex id
    int generation = 0;

    bool keeps(const PlanarGrid& g, std::size_t i, std::size_t j) const { return kept[g.id(i, j)]; }

    bool keeps_hedge(const PlanarGrid& g, std::size_t i, std::size_t j) const
    {
        return keeps(g, i, j) && keeps(g, i + 1, j);
    }
    bool keeps_vedge(const PlanarGrid& g, std::size_t i, std::size_t j) const
    {
        return keeps(g, i, j) && keeps(g, i, j + 1);
    }
    bool keeps_face(const PlanarGrid& g, std::size_t i, std::size_t j) const
    {
        return keeps(g, i, j) && keeps(g, i + 1, j) && keeps(g, i + 1, j + 1) && keeps(g, i, j + 1);
    }

    CellSet<Rational> cells(const PlanarGrid& g) const
    {
        CellSet<Rational> c;
        for (std::size_t i = 0; i < g.nx(); ++i)
            for (std::size_t j = 0; j < g.ny(); ++j) {
                if (!keeps(g, i, j)) continue;
                c.vertices.insert(g.vertex(i, j));
                if (i + 1 < g.nx() && keeps_hedge(g, i, j))
                    c.edges.insert(CellSet<Rational>::make_edge(g.vertex(i, j), g.vertex(i + 1, j)));
                if (j + 1 < g.ny() && keeps_vedge(g, i, j))
                    c.edges.insert(CellSet<Rational>::make_edge(g.vertex(i, j), g.vertex(i, j + 1)));
                if (i + 1 < g.nx() && j + 1 < g.ny() && keeps_face(g, i, j))
                    c.faces.insert({g.vertex(i, j), g.vertex(i + 1, j), g.vertex(i + 1, j + 1), g.vertex(i, j + 1)});
            }
        return c;
    }
};

struct SeparateHull {
    PlanarGrid grid;
    std::vector<FaceUnion> snapshots;  // B_0, B_1, ..., B_final
    int rounds = 0;  // pruning rounds that removed at least one vertex

    const FaceUnion& hull() const { return snapshots.back(); }
    CellSet<Rational> cells() const { return hull().cells(grid); }
};

namespace detail {

// True when some kept vertex lies strictly on each side of position k.
inline bool both_sides(const std::vector<bool>& kept_on_line, std::size_t k)
{
    bool before = false, after = false;
    for (std::size_t t = 0; t < k && !before; ++t) before = kept_on_line[t];
    for (std::size_t t = k + 1; t < kept_on_line.size() && !after; ++t) after = kept_on_line[t];
    return before && after;
}

}  // namespace detail

/// Separately convex hull of a finite planar set by iterated vertex pruning.
///
/// A non-input vertex is removed when neither of its two grid lines carries
/// kept vertices strictly on both of its sides. Each round tests every
/// vertex against the kept set at the start of the round, scanning in
/// lexicographic order, and removes all removable vertices at once.
inline SeparateHull separate_hull(const std::vector<PlanarPoint>& points)
{
    SeparateHull out;
    out.grid = build_grid(points);
    const PlanarGrid& g = out.grid;

    FaceUnion current;
    current.kept.assign(g.vertex_count(), true);
    out.snapshots.push_back(current);

    std::vector<bool> row(g.nx()), col(g.ny());
    for (;;) {
        std::vector<std::size_t> removable;
        for (std::size_t i = 0; i < g.nx(); ++i)
            for (std::size_t j = 0; j < g.ny(); ++j) {
                const std::size_t v = g.id(i, j);
                if (!current.kept[v] || g.is_input[v]) continue;
                for (std::size_t t = 0; t < g.nx(); ++t) row[t] = current.kept[g.id(t, j)];
                for (std::size_t t = 0; t < g.ny(); ++t) col[t] = current.kept[g.id(i, t)];
                if (!detail::both_sides(row, i) && !detail::both_sides(col, j)) removable.push_back(v);
            }
        if (removable.empty()) break;
        for (auto v : removable) current.kept[v] = false;
        ++out.rounds;
        current.generation = out.rounds;
        out.snapshots.push_back(current);
    }
    return out;
}

inline bool membership_2d(const SeparateHull& hull, const PlanarPoint& p)
{
    const PlanarGrid& g = hull.grid;
    const FaceUnion& h = hull.hull();
    if (g.xs.empty() || p.x < g.xs.front() || p.x > g.xs.back() || p.y < g.ys.front() || p.y > g.ys.back())
        return false;
    // Range of grid columns/rows whose closed cells can contain p.
    auto span = [](const std::vector<Rational>& c, const Rational& v) {
        auto lo = std::lower_bound(c.begin(), c.end(), v);
        std::size_t hi = static_cast<std::size_t>(lo - c.begin());
        if (lo != c.end() && *lo == v) return std::pair{hi, hi};
        return std::pair{hi - 1, hi};
    };
    const auto [i0, i1] = span(g.xs, p.x);
    const auto [j0, j1] = span(g.ys, p.y);
    if (i0 == i1 && j0 == j1) return h.keeps(g, i0, j0);
    if (i0 == i1) return h.keeps_vedge(g, i0, j0);
    if (j0 == j1) return h.keeps_hedge(g, i0, j0);
    return h.keeps_face(g, i0, j0);
}

}  // namespace rch
