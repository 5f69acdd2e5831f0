#pragma once

#include "rch/cells.hpp"
#include "rch/cone.hpp"
#include "rch/detail/linsolve.hpp"
#include "rch/field.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace rch {

namespace detail {

template <class F>
bool lex_less(const Point2<F>& a, const Point2<F>& b)
{
    const int sx = field_compare(a.x, b.x);
    if (sx != 0) return sx < 0;
    return field_compare(a.y, b.y) < 0;
}

template <class F>
bool same_point(const Point2<F>& a, const Point2<F>& b)
{
    return field_eq(a.x, b.x) && field_eq(a.y, b.y);
}

// Sort and merge points that compare equal under the field's sign test.
template <class F>
std::vector<Point2<F>> unique_points(std::vector<Point2<F>> pts)
{
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return lex_less(a, b); });
    std::vector<Point2<F>> out;
    for (auto& p : pts)
        if (out.empty() || !same_point(out.back(), p)) out.push_back(std::move(p));
    return out;
}

// Counterclockwise convex hull without collinear points (monotone chain).
template <class F>
std::vector<Point2<F>> convex_hull(std::vector<Point2<F>> pts)
{
    pts = unique_points(std::move(pts));
    if (pts.size() < 3) return pts;
    std::vector<Point2<F>> h(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && field_sign(cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2])) <= 0) --k;
        h[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && field_sign(cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2])) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

template <class F>
bool in_region(const std::vector<Point2<F>>& region, const Point2<F>& p)
{
    if (region.size() == 1) return same_point(region[0], p);
    if (region.size() == 2) return CellSet<F>::on_segment(region[0], region[1], p);
    return CellSet<F>::in_convex_polygon(region, p);
}

template <class F>
Point2<F> normal_of(const Point2<F>& d)
{
    return {F(0) - d.y, d.x};
}

// Angular order of outgoing directions, counterclockwise from +x.
template <class F>
bool angle_less(const Point2<F>& a, const Point2<F>& b)
{
    auto half = [](const Point2<F>& v) {
        const int sy = field_sign(v.y);
        return sy > 0 || (sy == 0 && field_sign(v.x) > 0) ? 0 : 1;
    };
    const int ha = half(a), hb = half(b);
    if (ha != hb) return ha < hb;
    return field_sign(cross(a, b)) > 0;
}

}  // namespace detail

/// Arrangement of the cone's line families through given offsets, clipped to
/// the convex hull of the input points.
template <class F>
struct DGrid {
    struct Line {
        std::size_t family = 0;
        F offset{};
        bool grid = false;               // one of the arrangement lines
        std::vector<std::size_t> members;  // vertices ordered along the direction
    };

    Cone<F> cone;
    std::vector<Point2<F>> points;  // deduplicated input
    std::vector<Point2<F>> region;  // convex hull of the input, counterclockwise
    std::vector<std::vector<F>> offsets;  // per family, sorted
    std::vector<Point2<F>> vertices;      // lexicographic
    std::vector<bool> is_input;
    std::vector<Line> lines;              // every line through some vertex in some family
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> on_line;  // per vertex: (line, position) per family
    std::vector<std::array<std::size_t, 2>> edges;
    std::vector<std::vector<std::size_t>> faces;  // counterclockwise vertex ids

    std::size_t vertex_count() const { return vertices.size(); }

    std::optional<std::size_t> find(const Point2<F>& p) const
    {
        auto it = std::lower_bound(vertices.begin(), vertices.end(), p,
                                   [](const auto& a, const auto& b) { return detail::lex_less(a, b); });
        if (it != vertices.end() && detail::same_point(*it, p)) return static_cast<std::size_t>(it - vertices.begin());
        return std::nullopt;
    }
};

class GridBudgetExceeded : public Error {
public:
    GridBudgetExceeded() : Error("D-grid vertex budget exceeded") {}
};

namespace detail {

template <class F>
void sort_unique(std::vector<F>& v)
{
    std::sort(v.begin(), v.end(), [](const F& a, const F& b) { return field_compare(a, b) < 0; });
    v.erase(std::unique(v.begin(), v.end(), [](const F& a, const F& b) { return field_eq(a, b); }), v.end());
}

template <class F>
bool contains_offset(const std::vector<F>& sorted, const F& c)
{
    auto it = std::lower_bound(sorted.begin(), sorted.end(), c, [](const F& a, const F& b) { return field_compare(a, b) < 0; });
    return it != sorted.end() && field_eq(*it, c);
}

}  // namespace detail

/// Builds the D-grid from explicit per-family line offsets (n_k . p = c with
/// n_k the normal of direction k). `max_vertices` of 0 means unbounded.
template <class F>
DGrid<F> build_dgrid(const std::vector<Point2<F>>& input, const Cone<F>& cone, std::vector<std::vector<F>> offsets,
                     std::size_t max_vertices = 0)
{
    if (input.empty()) throw Error("D-grid of an empty set");
    if (cone.size() < 2) throw Error("cone needs at least two directions");
    DGrid<F> g;
    g.cone = cone;
    g.points = detail::unique_points(input);
    g.region = detail::convex_hull(g.points);
    const std::size_t k = cone.size();
    offsets.resize(k);
    for (std::size_t f = 0; f < k; ++f) {
        for (const auto& p : g.points) offsets[f].push_back(dot(detail::normal_of(cone[f]), p));
        detail::sort_unique(offsets[f]);
    }
    g.offsets = offsets;

    std::size_t pairs = 0;
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b) pairs += offsets[a].size() * offsets[b].size();
    if (max_vertices && pairs > 64 * max_vertices) throw GridBudgetExceeded();

    std::vector<Point2<F>> verts;
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b) {
            const Point2<F> na = detail::normal_of(cone[a]), nb = detail::normal_of(cone[b]);
            const F det = cross(na, nb);
            for (const F& ca : offsets[a])
                for (const F& cb : offsets[b]) {
                    Point2<F> p{(ca * nb.y - cb * na.y) / det, (na.x * cb - nb.x * ca) / det};
                    if (detail::in_region(g.region, p)) verts.push_back(std::move(p));
                }
        }
    g.vertices = detail::unique_points(std::move(verts));
    if (max_vertices && g.vertices.size() > max_vertices) throw GridBudgetExceeded();
    const std::size_t n = g.vertices.size();
    g.is_input.assign(n, false);
    for (const auto& p : g.points) g.is_input[*g.find(p)] = true;

    // lines of every family through every vertex
    g.on_line.assign(n, std::vector<std::pair<std::size_t, std::size_t>>(k));
    std::vector<std::size_t> ids(n);
    for (std::size_t f = 0; f < k; ++f) {
        const Point2<F> nf = detail::normal_of(cone[f]);
        const Point2<F>& d = cone[f];
        std::vector<F> off(n), along(n);
        for (std::size_t v = 0; v < n; ++v) off[v] = dot(nf, g.vertices[v]), along[v] = dot(d, g.vertices[v]);
        std::iota(ids.begin(), ids.end(), 0);
        std::sort(ids.begin(), ids.end(), [&](std::size_t a, std::size_t b) {
            const int s = field_compare(off[a], off[b]);
            if (s != 0) return s < 0;
            return field_compare(along[a], along[b]) < 0;
        });
        for (std::size_t t = 0; t < n; ++t) {
            const std::size_t v = ids[t];
            if (t == 0 || !field_eq(off[ids[t - 1]], off[v])) {
                typename DGrid<F>::Line line;
                line.family = f;
                line.offset = off[v];
                line.grid = detail::contains_offset(offsets[f], off[v]);
                g.lines.push_back(std::move(line));
            }
            auto& line = g.lines.back();
            g.on_line[v][f] = {g.lines.size() - 1, line.members.size()};
            line.members.push_back(v);
        }
    }

    // edges between consecutive vertices on arrangement lines
    std::vector<std::vector<std::size_t>> out(n);  // neighbour ids
    for (const auto& line : g.lines) {
        if (!line.grid) continue;
        for (std::size_t t = 0; t + 1 < line.members.size(); ++t) {
            const std::size_t a = line.members[t], b = line.members[t + 1];
            g.edges.push_back({std::min(a, b), std::max(a, b)});
            out[a].push_back(b);
            out[b].push_back(a);
        }
    }
    std::sort(g.edges.begin(), g.edges.end());

    // bounded faces of the planar graph: follow each half-edge with the face on its left
    for (std::size_t v = 0; v < n; ++v)
        std::sort(out[v].begin(), out[v].end(), [&](std::size_t a, std::size_t b) {
            return detail::angle_less(g.vertices[a] - g.vertices[v], g.vertices[b] - g.vertices[v]);
        });
    std::vector<std::vector<char>> used(n);
    for (std::size_t v = 0; v < n; ++v) used[v].assign(out[v].size(), 0);
    auto slot = [&](std::size_t v, std::size_t w) {
        return static_cast<std::size_t>(std::find(out[v].begin(), out[v].end(), w) - out[v].begin());
    };
    for (std::size_t v0 = 0; v0 < n; ++v0)
        for (std::size_t s0 = 0; s0 < out[v0].size(); ++s0) {
            if (used[v0][s0]) continue;
            std::vector<std::size_t> cycle;
            std::size_t u = v0, s = s0;
            while (!used[u][s]) {
                used[u][s] = 1;
                cycle.push_back(u);
                const std::size_t w = out[u][s];
                const std::size_t back = slot(w, u);
                s = (back + out[w].size() - 1) % out[w].size();  // clockwise neighbour of the way back
                u = w;
            }
            F area(0);
            for (std::size_t t = 0; t < cycle.size(); ++t)
                area = area + cross(g.vertices[cycle[t]], g.vertices[cycle[(t + 1) % cycle.size()]]);
            if (field_sign(area) > 0) g.faces.push_back(std::move(cycle));
        }
    return g;
}

template <class F>
DGrid<F> build_dgrid(const std::vector<Point2<F>>& input, const Cone<F>& cone)
{
    return build_dgrid(input, cone, {});
}

template <class F>
struct DHull {
    DGrid<F> grid;
    std::vector<bool> kept;
    int rounds = 0;  // pruning rounds that removed something
    std::vector<std::size_t> kept_per_round;

    CellSet<F> cells() const
    {
        CellSet<F> c;
        for (std::size_t v = 0; v < kept.size(); ++v)
            if (kept[v]) c.vertices.insert(grid.vertices[v]);
        for (const auto& [a, b] : grid.edges)
            if (kept[a] && kept[b]) c.edges.insert(CellSet<F>::make_edge(grid.vertices[a], grid.vertices[b]));
        for (const auto& f : grid.faces) {
            if (!std::all_of(f.begin(), f.end(), [&](std::size_t v) { return kept[v]; })) continue;
            typename CellSet<F>::Face face;
            for (auto v : f) face.push_back(grid.vertices[v]);
            c.faces.insert(CellSet<F>::canonical_face(std::move(face)));
        }
        return c;
    }

    bool contains(const Point2<F>& p) const { return cells().contains(p); }
};

/// Fixed-point pruning on a prepared D-grid: a non-input vertex goes when no
/// cone direction has kept vertices strictly on both of its sides. Rounds are
/// simultaneous, as in the axis case.
template <class F>
DHull<F> prune_dgrid(DGrid<F> grid)
{
    DHull<F> h;
    h.grid = std::move(grid);
    const DGrid<F>& g = h.grid;
    const std::size_t n = g.vertex_count();
    h.kept.assign(n, true);
    h.kept_per_round.push_back(n);
    std::vector<std::size_t> first(g.lines.size()), last(g.lines.size());
    for (;;) {
        for (std::size_t l = 0; l < g.lines.size(); ++l) {
            const auto& m = g.lines[l].members;
            first[l] = m.size(), last[l] = 0;
            for (std::size_t t = 0; t < m.size(); ++t)
                if (h.kept[m[t]]) first[l] = std::min(first[l], t), last[l] = t;
        }
        std::vector<std::size_t> removable;
        for (std::size_t v = 0; v < n; ++v) {
            if (!h.kept[v] || g.is_input[v]) continue;
            bool supported = false;
            for (const auto& [l, pos] : g.on_line[v])
                if (first[l] < pos && pos < last[l]) supported = true;
            if (!supported) removable.push_back(v);
        }
        if (removable.empty()) break;
        for (auto v : removable) h.kept[v] = false;
        ++h.rounds;
        h.kept_per_round.push_back(static_cast<std::size_t>(std::count(h.kept.begin(), h.kept.end(), true)));
    }
    return h;
}

template <class F>
DHull<F> d_hull_2d(const std::vector<Point2<F>>& points, const Cone<F>& cone)
{
    return prune_dgrid(build_dgrid(points, cone));
}

/// K_i = P + C_1 + ... + C_{i-1} + alpha_i C_i with C_1 + C_2 + C_3 = 0.
template <class F>
struct T3Data {
    std::array<Point2<F>, 3> K;
    Point2<F> P;
    std::array<Point2<F>, 3> C;
    std::array<F, 3> alpha;
    std::array<std::size_t, 3> direction;  // cone index of each leg
    std::array<int, 3> order;              // input index of K_i

    std::array<Point2<F>, 3> inner() const { return {P, P + C[0], P + C[0] + C[1]}; }
};

/// Tries every ordering of the points and every assignment of three distinct
/// cone directions to the legs; the leg sizes come from one linear solve.
template <class F>
std::optional<T3Data<F>> detect_t3(const std::array<Point2<F>, 3>& pts, const Cone<F>& cone)
{
    if (cone.size() < 3) throw Error("T3 detection needs at least three directions");
    std::array<int, 3> perm{0, 1, 2};
    do {
        const std::size_t m = cone.size();
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < m; ++b)
                for (std::size_t c = 0; c < m; ++c) {
                    if (a == b || b == c || a == c) continue;
                    const Point2<F>& d1 = cone[a];
                    const Point2<F>& d2 = cone[b];
                    const Point2<F>& d3 = cone[c];
                    // c1 d1 + c2 d2 + c3 d3 = 0
                    const Point2<F> c1 = cross(d2, d3) * d1, c2 = cross(d3, d1) * d2, c3 = cross(d1, d2) * d3;
                    // unknowns P.x, P.y, s, b1, b2, b3 with C_i = s c_i and b_i = alpha_i s
                    const Point2<F>& k1 = pts[perm[0]];
                    const Point2<F>& k2 = pts[perm[1]];
                    const Point2<F>& k3 = pts[perm[2]];
                    const F z(0), o(1);
                    std::vector<std::vector<F>> A{
                        {o, z, z, c1.x, z, z}, {z, o, z, c1.y, z, z},
                        {o, z, c1.x, z, c2.x, z}, {z, o, c1.y, z, c2.y, z},
                        {o, z, c1.x + c2.x, z, z, c3.x}, {z, o, c1.y + c2.y, z, z, c3.y}};
                    auto sol = detail::solve_linear<F>(A, {k1.x, k1.y, k2.x, k2.y, k3.x, k3.y});
                    if (!sol || field_sign((*sol)[2]) == 0) continue;
                    const F& s = (*sol)[2];
                    T3Data<F> t;
                    t.K = {k1, k2, k3};
                    t.P = {(*sol)[0], (*sol)[1]};
                    t.C = {s * c1, s * c2, s * c3};
                    bool ok = true;
                    for (int i = 0; i < 3; ++i) {
                        t.alpha[i] = (*sol)[3 + i] / s;
                        if (field_compare(t.alpha[i], F(1)) < 0) ok = false;
                    }
                    if (!ok) continue;
                    t.direction = {a, b, c};
                    t.order = perm;
                    return t;
                }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::nullopt;
}

class DegeneratePlane : public Error {
public:
    DegeneratePlane() : Error("lifted T3 points do not span a unique non-vertical plane") {}
};

/// z = u x + v y + w over the planar T3 hull.
struct T3Hull {
    T3Data<Rational> t3;
    Rational u, v, w;
    DHull<Rational> planar;

    Rational height(const PlanarPoint& p) const { return u * p.x + v * p.y + w; }
    bool contains(const TriPoint& p) const { return p.z == height(project(p)) && planar.contains(project(p)); }
};

inline T3Hull t3_hull_3d(const std::array<TriPoint, 3>& pts, const DirectionCone& cone)
{
    const std::array<PlanarPoint, 3> proj{project(pts[0]), project(pts[1]), project(pts[2])};
    auto t3 = detect_t3(proj, cone);
    if (!t3) throw Error("projections are not a T3 configuration for this cone");
    const TriPoint a = pts[1] - pts[0], b = pts[2] - pts[0];
    const Rational nx = a.y * b.z - a.z * b.y, ny = a.z * b.x - a.x * b.z, nz = a.x * b.y - a.y * b.x;
    if (nz == 0) throw DegeneratePlane();
    T3Hull h{*t3, -nx / nz, -ny / nz, 0, d_hull_2d(std::vector<PlanarPoint>(proj.begin(), proj.end()), cone)};
    h.w = pts[0].z - h.u * pts[0].x - h.v * pts[0].y;
    return h;
}

struct RefinementReport {
    std::vector<std::size_t> vertex_counts;  // grid vertices per round
    int rounds = 0;
    bool terminated = false;
    bool budget_exhausted = false;
    std::string note;
};

/// Rounds of: D-hull of the current grid, then cone lines through every kept
/// vertex that lacks them. Stops when nothing is added, at max_rounds, or
/// when the grid would exceed max_vertices.
template <class F>
RefinementReport refine_grid(const std::vector<Point2<F>>& points, const Cone<F>& cone, int max_rounds,
                             std::size_t max_vertices = 200000)
{
    if (max_rounds < 1) throw Error("max_rounds must be at least 1");
    RefinementReport r;
    std::vector<std::vector<F>> offsets(cone.size());
    for (int round = 1; round <= max_rounds; ++round) {
        std::optional<DHull<F>> hull;
        try {
            hull = prune_dgrid(build_dgrid(points, cone, offsets, max_vertices));
        } catch (const GridBudgetExceeded&) {
            r.budget_exhausted = true;
            break;
        }
        r.rounds = round;
        r.vertex_counts.push_back(hull->grid.vertex_count());
        offsets = hull->grid.offsets;
        bool added = false;
        for (std::size_t v = 0; v < hull->kept.size(); ++v) {
            if (!hull->kept[v]) continue;
            for (std::size_t f = 0; f < cone.size(); ++f) {
                const F c = dot(detail::normal_of(cone[f]), hull->grid.vertices[v]);
                if (!detail::contains_offset(hull->grid.offsets[f], c)) offsets[f].push_back(c), added = true;
            }
        }
        if (!added) {
            r.terminated = true;
            break;
        }
        for (auto& o : offsets) detail::sort_unique(o);
    }
    r.note = r.terminated ? "grid closed under translation of the cone to its vertices"
                          : "no fixed point within the round or vertex budget; growth is evidence, not a proof of non-termination";
    return r;
}

}  // namespace rch
