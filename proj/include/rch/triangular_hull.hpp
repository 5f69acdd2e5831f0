#pragma once

#include "rch/envelope.hpp"
#include "rch/planar_hull.hpp"
#include "rch/cells.hpp"
#include "rch/quadric.hpp"
#include "rch/t4.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <set>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace rch {

struct HullOptions {
    std::optional<Rational> bound;  // M; default max |z(K)|
    int inner_rounds = 64;
    double reconcile_tol = -1;      // negative: two oracle grid spacings
    int oracle_resolution = 60;     // nodes per axis; 0 skips the outer pass
    double oracle_tol = 1e-6;
    int oracle_sweeps = 200;
    int threads = 1;
};

/// How a certified point was obtained. Segment nodes satisfy
/// point = mu * node[a].point + (1 - mu) * node[b].point exactly, with the two
/// endpoints rank-one connected. T4 nodes are segments produced by a lifted
/// T4 cycle; their references may form a cycle.
enum class Source { Input, Segment, T4 };

struct ProvNode {
    TriPoint point;
    Source source = Source::Input;
    int a = -1;
    int b = -1;
    Rational mu;
};

/// Certified upper and lower heights over the planar grid vertices.
struct HeightField {
    std::vector<int> upper;  // node id per grid vertex, -1 when unknown
    std::vector<int> lower;
    std::vector<ProvNode> nodes;

    bool known(std::size_t v, bool up) const { return (up ? upper : lower)[v] >= 0; }
    bool known(std::size_t v) const { return upper[v] >= 0 && lower[v] >= 0; }
    const Rational& z(std::size_t v, bool up) const { return nodes[(up ? upper : lower)[v]].point.z; }
    int add(ProvNode n)
    {
        nodes.push_back(std::move(n));
        return static_cast<int>(nodes.size()) - 1;
    }
};

namespace detail {

class InnerEngine {
public:
    InnerEngine(const PlanarGrid& g, const FaceUnion& kept, HeightField& h) : g_(g), kept_(kept), h_(h) {}

    bool round()
    {
        bool changed = false;
        for (int s : {1, -1}) changed |= laminate_lines(s > 0);
        for (int s : {1, -1}) changed |= t4_rectangles(s > 0);
        return changed;
    }

private:
    // s-space value: z for the upper field, -z for the lower one.
    Rational val(std::size_t v, bool up) const { return up ? h_.z(v, true) : Rational(-h_.z(v, false)); }

    bool better(std::size_t v, bool up, const Rational& sv) const { return !h_.known(v, up) || sv > val(v, up); }

    void set(std::size_t v, bool up, int node) { (up ? h_.upper : h_.lower)[v] = node; }

    bool laminate_line(const std::vector<std::size_t>& ids, const std::vector<Rational>& pos, bool up)
    {
        // concave majorant of the known s-values
        std::vector<std::size_t> hull;
        for (std::size_t t = 0; t < ids.size(); ++t) {
            if (!h_.known(ids[t], up)) continue;
            while (hull.size() >= 2) {
                const std::size_t a = hull[hull.size() - 2], b = hull.back();
                // drop b unless strictly above the chord a-t
                const Rational lhs = (val(ids[b], up) - val(ids[a], up)) * (pos[t] - pos[a]);
                const Rational rhs = (val(ids[t], up) - val(ids[a], up)) * (pos[b] - pos[a]);
                if (lhs <= rhs)
                    hull.pop_back();
                else
                    break;
            }
            hull.push_back(t);
        }
        bool changed = false;
        for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
            const std::size_t a = hull[h], b = hull[h + 1];
            for (std::size_t t = a + 1; t < b; ++t) {
                const Rational mu = (pos[b] - pos[t]) / (pos[b] - pos[a]);
                const Rational sv = mu * val(ids[a], up) + (1 - mu) * val(ids[b], up);
                if (!better(ids[t], up, sv)) continue;
                const int na = (up ? h_.upper : h_.lower)[ids[a]];
                const int nb = (up ? h_.upper : h_.lower)[ids[b]];
                set(ids[t], up, h_.add({lift(g_.vertex(ids[t]), up ? sv : Rational(-sv)), Source::Segment, na, nb, mu}));
                changed = true;
            }
        }
        return changed;
    }

    bool laminate_lines(bool up)
    {
        bool changed = false;
        std::vector<std::size_t> ids;
        std::vector<Rational> pos;
        for (std::size_t j = 0; j < g_.ny(); ++j) {
            ids.clear(), pos.clear();
            for (std::size_t i = 0; i < g_.nx(); ++i)
                if (kept_.keeps(g_, i, j)) ids.push_back(g_.id(i, j)), pos.push_back(g_.xs[i]);
            changed |= laminate_line(ids, pos, up);
        }
        for (std::size_t i = 0; i < g_.nx(); ++i) {
            ids.clear(), pos.clear();
            for (std::size_t j = 0; j < g_.ny(); ++j)
                if (kept_.keeps(g_, i, j)) ids.push_back(g_.id(i, j)), pos.push_back(g_.ys[j]);
            changed |= laminate_line(ids, pos, up);
        }
        return changed;
    }

    struct Candidate {
        std::size_t vertex;
        Rational mu;
    };

    // Kept vertices with known height on the ray from corner `from` through
    // corner `to`, at or beyond `to`.
    std::vector<Candidate> leg(std::array<std::size_t, 2> from, std::array<std::size_t, 2> to, bool up) const
    {
        std::vector<Candidate> out;
        const bool horizontal = from[1] == to[1];
        const Rational& f = horizontal ? g_.xs[from[0]] : g_.ys[from[1]];
        const Rational& t = horizontal ? g_.xs[to[0]] : g_.ys[to[1]];
        const std::size_t n = horizontal ? g_.nx() : g_.ny();
        for (std::size_t w = 0; w < n; ++w) {
            const std::size_t v = horizontal ? g_.id(w, from[1]) : g_.id(from[0], w);
            if (!kept_.kept[v] || !h_.known(v, up)) continue;
            const Rational& c = horizontal ? g_.xs[w] : g_.ys[w];
            const Rational alpha = (c - f) / (t - f);
            if (alpha >= 1) out.push_back({v, 1 / alpha});
        }
        return out;
    }

    bool t4_cycle(const std::array<std::array<std::size_t, 2>, 4>& c, bool up)
    {
        std::array<std::vector<Candidate>, 4> cand;
        for (int m = 0; m < 4; ++m) {
            cand[m] = leg(c[m], c[(m + 1) % 4], up);
            if (cand[m].empty()) return false;
        }
        // Policy iteration for Q[m+1] = max_c mu_c z_c + (1 - mu_c) Q[m].
        std::array<std::size_t, 4> choice{};
        for (int m = 0; m < 4; ++m)
            for (std::size_t k = 1; k < cand[m].size(); ++k)
                if (val(cand[m][k].vertex, up) > val(cand[m][choice[m]].vertex, up)) choice[m] = k;
        std::array<Rational, 4> q;
        auto solve = [&] {
            Rational a = 0, b = 1;  // Q[0] after one loop = a + b Q[0]
            for (int m = 0; m < 4; ++m) {
                const Candidate& cc = cand[m][choice[m]];
                a = cc.mu * val(cc.vertex, up) + (1 - cc.mu) * a;
                b = (1 - cc.mu) * b;
            }
            q[0] = a / (1 - b);
            for (int m = 0; m < 3; ++m) {
                const Candidate& cc = cand[m][choice[m]];
                q[m + 1] = cc.mu * val(cc.vertex, up) + (1 - cc.mu) * q[m];
            }
        };
        for (int iter = 0; iter < 64; ++iter) {
            solve();
            bool switched = false;
            for (int m = 0; m < 4; ++m) {
                auto value = [&](const Candidate& cc) -> Rational { return cc.mu * val(cc.vertex, up) + (1 - cc.mu) * q[m]; };
                std::size_t best = choice[m];
                for (std::size_t k = 0; k < cand[m].size(); ++k)
                    if (value(cand[m][k]) > value(cand[m][best])) best = k;
                if (best != choice[m]) choice[m] = best, switched = true;
            }
            if (!switched) break;
        }

        bool improves = false;
        for (int m = 0; m < 4; ++m) improves |= better(g_.id(c[m][0], c[m][1]), up, q[m]);
        if (!improves) return false;

        // Provenance: Q[m+1] = mu K + (1 - mu) Q[m]; mu = 1 aliases K.
        std::array<int, 4> node{};
        for (int m = 0; m < 4; ++m) {
            const Candidate& cc = cand[m][choice[m]];
            const int k = (m + 1) % 4;
            if (cc.mu == 1)
                node[k] = (up ? h_.upper : h_.lower)[cc.vertex];
            else
                node[k] = h_.add({lift(g_.vertex(c[k][0], c[k][1]), up ? q[k] : Rational(-q[k])), Source::T4, -1, -1, cc.mu});
        }
        for (int m = 0; m < 4; ++m) {
            const Candidate& cc = cand[m][choice[m]];
            if (cc.mu == 1) continue;
            ProvNode& n = h_.nodes[node[(m + 1) % 4]];
            n.a = (up ? h_.upper : h_.lower)[cc.vertex];
            n.b = node[m];
        }
        for (int m = 0; m < 4; ++m) {
            const std::size_t v = g_.id(c[m][0], c[m][1]);
            if (better(v, up, q[m])) set(v, up, node[m]);
        }
        return true;
    }

    bool t4_rectangles(bool up)
    {
        bool changed = false;
        for (std::size_t i0 = 0; i0 < g_.nx(); ++i0)
            for (std::size_t i1 = i0 + 1; i1 < g_.nx(); ++i1)
                for (std::size_t j0 = 0; j0 < g_.ny(); ++j0)
                    for (std::size_t j1 = j0 + 1; j1 < g_.ny(); ++j1) {
                        if (!kept_.keeps(g_, i0, j0) || !kept_.keeps(g_, i1, j0) || !kept_.keeps(g_, i1, j1) ||
                            !kept_.keeps(g_, i0, j1))
                            continue;
                        const std::array<std::size_t, 2> a{i0, j0}, b{i1, j0}, c{i1, j1}, d{i0, j1};
                        changed |= t4_cycle({a, b, c, d}, up);
                        changed |= t4_cycle({a, d, c, b}, up);
                    }
        return changed;
    }

    const PlanarGrid& g_;
    const FaceUnion& kept_;
    HeightField& h_;
};

}  // namespace detail

/// Inner heights by alternating lamination along grid lines and lifted T4
/// cycles over axis rectangles with kept corners, to an exact fixed point or
/// the round cap.
inline HeightField inner_heights(const std::vector<TriPoint>& K, const SeparateHull& planar, int max_rounds,
                                 int* rounds = nullptr, bool* converged = nullptr)
{
    const PlanarGrid& g = planar.grid;
    HeightField h;
    h.upper.assign(g.vertex_count(), -1);
    h.lower.assign(g.vertex_count(), -1);
    for (const auto& k : K) {
        const std::size_t v = g.id(*g.x_index(k.x), *g.y_index(k.y));
        const int n = h.add({k, Source::Input, -1, -1, 0});
        if (h.upper[v] < 0 || k.z > h.z(v, true)) h.upper[v] = n;
        if (h.lower[v] < 0 || k.z < h.z(v, false)) h.lower[v] = n;
    }
    detail::InnerEngine engine(g, planar.hull(), h);
    int r = 0;
    bool done = false;
    while (r < max_rounds) {
        ++r;
        if (!engine.round()) {
            done = true;
            break;
        }
    }
    if (rounds) *rounds = r;
    if (converged) *converged = done;
    return h;
}

struct VertexSpan {
    PlanarPoint at;
    std::optional<Rational> z_lower;
    std::optional<Rational> z_upper;
    bool resolved = true;
    std::optional<double> outer_lower;
    std::optional<double> outer_upper;
};

struct RectangleCell {
    Rational x0, x1, y0, y1;
    Quadric q_upper;  // q_upper <= 0 below the upper surface
    Quadric q_lower;  // q_lower >= 0 above the lower surface
};

struct LinearForm {
    int axis = 0;  // 0: x - c, 1: y - c
    Rational c;

    friend bool operator<(const LinearForm& a, const LinearForm& b)
    {
        if (a.axis != b.axis) return a.axis < b.axis;
        return a.c > b.c;
    }
    friend bool operator==(const LinearForm& a, const LinearForm& b) { return a.axis == b.axis && a.c == b.c; }

    std::string str() const
    {
        RankOnePoly p;
        (axis == 0 ? p.cx : p.cy) = 1;
        p.c1 = -c;
        return p.str();
    }
};

/// The hull as a union of cells over the planar support: vertical segments
/// over kept vertices, quadrilaterals over kept edges, quadric slabs over kept
/// rectangles.
struct SemialgebraicDescription {
    std::vector<TriPoint> points;
    std::vector<VertexSpan> vertices;
    std::vector<std::pair<PlanarPoint, PlanarPoint>> edges;
    std::vector<RectangleCell> rectangles;
    std::vector<LinearForm> linear_forms;

    bool resolved() const
    {
        for (const auto& v : vertices)
            if (!v.resolved) return false;
        return true;
    }

    const VertexSpan* vertex(const PlanarPoint& p) const
    {
        for (const auto& v : vertices)
            if (v.at == p) return &v;
        return nullptr;
    }

    /// Distinct quadrics in order of first appearance (upper, then lower, per rectangle).
    std::vector<Quadric> quadrics() const
    {
        std::vector<Quadric> out;
        for (const auto& r : rectangles)
            for (const Quadric* q : {&r.q_upper, &r.q_lower})
                if (std::find(out.begin(), out.end(), *q) == out.end()) out.push_back(*q);
        return out;
    }
};

struct HeightGap {
    PlanarPoint at;
    std::optional<Rational> inner_lower, inner_upper;
    std::optional<double> outer_lower, outer_upper;
};

class UnresolvedHeights : public Error {
public:
    explicit UnresolvedHeights(std::vector<HeightGap> gaps)
        : Error(std::to_string(gaps.size()) + " vertex height(s) unresolved"), gaps_(std::move(gaps))
    {
    }
    const std::vector<HeightGap>& gaps() const { return gaps_; }

private:
    std::vector<HeightGap> gaps_;
};

struct SignCensus {
    int positive = 0;
    int negative = 0;
    int zero = 0;
};

struct HullDiagnostics {
    int inner_rounds = 0;
    bool inner_converged = false;
    bool oracle_run = false;
    int oracle_sweeps = 0;
    double oracle_residual = 0;
    bool oracle_converged = false;
    double oracle_spacing = 0;
    double reconcile_tol = 0;
    std::vector<HeightGap> gaps;
    // Signs of every rectangle's quadrics at every input point.
    SignCensus upper_signs, lower_signs;
};

struct HullResult {
    SemialgebraicDescription desc;
    SeparateHull planar;
    HeightField heights;
    HullDiagnostics diagnostics;

    void require_resolved() const
    {
        if (!diagnostics.gaps.empty()) throw UnresolvedHeights(diagnostics.gaps);
    }
};

inline Rational default_bound(const std::vector<TriPoint>& K)
{
    Rational m = 0;
    for (const auto& k : K) m = std::max(m, abs(k.z));
    return m;
}

inline HullResult compute_hull(const std::vector<TriPoint>& K_in, const HullOptions& opts = {})
{
    if (K_in.empty()) throw EmptyInput();
    if (opts.inner_rounds < 1) throw Error("inner round cap must be positive");
    const std::vector<TriPoint> K = unique_sorted(K_in);
    const Rational M = opts.bound ? *opts.bound : default_bound(K);
    if (M < default_bound(K)) throw Error("bound M is below max |z| of the input");

    HullResult res;
    std::vector<PlanarPoint> proj;
    for (const auto& k : K) proj.push_back(project(k));
    res.planar = separate_hull(proj);
    const PlanarGrid& g = res.planar.grid;
    const FaceUnion& kept = res.planar.hull();

    std::vector<std::size_t> kept_ids;
    std::vector<PlanarPoint> kept_pts;
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
        if (kept.kept[v]) kept_ids.push_back(v), kept_pts.push_back(g.vertex(v));

    auto outer = [&]() -> std::optional<std::pair<EnvelopeResult, std::vector<OuterHeight>>> {
        if (opts.oracle_resolution <= 0) return std::nullopt;
        const int n = opts.oracle_resolution;
        Grid3 grid = init_distance_field(K, Grid3::around(K, n, n, n, M.get_d()));
        EnvelopeResult env = rc_envelope(std::move(grid), opts.oracle_tol, opts.oracle_sweeps, opts.threads);
        auto heights = outer_heights(env.field, kept_pts);
        return std::make_pair(std::move(env), std::move(heights));
    };
    std::future<std::optional<std::pair<EnvelopeResult, std::vector<OuterHeight>>>> outer_job;
    if (opts.threads > 1) outer_job = std::async(std::launch::async, outer);

    auto& d = res.diagnostics;
    res.heights = inner_heights(K, res.planar, opts.inner_rounds, &d.inner_rounds, &d.inner_converged);
    const HeightField& h = res.heights;

    auto out = opts.threads > 1 ? outer_job.get() : outer();
    if (out) {
        d.oracle_run = true;
        d.oracle_sweeps = out->first.sweeps;
        d.oracle_residual = out->first.residual;
        d.oracle_converged = out->first.converged;
        d.oracle_spacing = out->first.field.spacing();
        d.reconcile_tol = opts.reconcile_tol >= 0 ? opts.reconcile_tol : 2 * d.oracle_spacing;
    }

    SemialgebraicDescription& desc = res.desc;
    desc.points = K;
    for (std::size_t t = 0; t < kept_ids.size(); ++t) {
        const std::size_t v = kept_ids[t];
        VertexSpan s{kept_pts[t], {}, {}, true, {}, {}};
        if (h.known(v)) s.z_lower = h.z(v, false), s.z_upper = h.z(v, true);
        s.resolved = h.known(v);
        if (out) {
            const OuterHeight& o = out->second[t];
            s.outer_lower = o.lower, s.outer_upper = o.upper;
            auto close = [&](const std::optional<Rational>& a, const std::optional<double>& b) {
                return a && b && std::fabs(a->get_d() - *b) <= d.reconcile_tol;
            };
            s.resolved = s.resolved && close(s.z_lower, s.outer_lower) && close(s.z_upper, s.outer_upper);
        }
        if (!s.resolved) d.gaps.push_back({s.at, s.z_lower, s.z_upper, s.outer_lower, s.outer_upper});
        desc.vertices.push_back(std::move(s));
    }

    std::set<LinearForm> forms;
    for (std::size_t i = 0; i < g.nx(); ++i)
        for (std::size_t j = 0; j < g.ny(); ++j) {
            if (!kept.keeps(g, i, j)) continue;
            if (i + 1 < g.nx() && kept.keeps_hedge(g, i, j)) desc.edges.push_back({g.vertex(i, j), g.vertex(i + 1, j)});
            if (j + 1 < g.ny() && kept.keeps_vedge(g, i, j)) desc.edges.push_back({g.vertex(i, j), g.vertex(i, j + 1)});
            if (i + 1 >= g.nx() || j + 1 >= g.ny() || !kept.keeps_face(g, i, j)) continue;
            const std::array<std::size_t, 4> c{g.id(i, j), g.id(i + 1, j), g.id(i + 1, j + 1), g.id(i, j + 1)};
            if (!std::all_of(c.begin(), c.end(), [&](std::size_t v) { return h.known(v); })) continue;
            std::array<TriPoint, 4> up, lo;
            for (int m = 0; m < 4; ++m) {
                up[m] = lift(g.vertex(c[m]), h.z(c[m], true));
                lo[m] = lift(g.vertex(c[m]), h.z(c[m], false));
            }
            desc.rectangles.push_back({g.xs[i], g.xs[i + 1], g.ys[j], g.ys[j + 1], fit_quadric(up), fit_quadric(lo)});
            forms.insert({0, g.xs[i]}), forms.insert({0, g.xs[i + 1]});
            forms.insert({1, g.ys[j]}), forms.insert({1, g.ys[j + 1]});
        }
    desc.linear_forms.assign(forms.begin(), forms.end());

    for (const auto& r : desc.rectangles)
        for (const auto& k : K) {
            for (auto [q, census] : {std::pair{&r.q_upper, &d.upper_signs}, std::pair{&r.q_lower, &d.lower_signs}}) {
                const int s = sgn((*q)(k));
                (s > 0 ? census->positive : s < 0 ? census->negative : census->zero)++;
            }
        }
    return res;
}

enum class Membership { Inside, OutsideHeight, OutsidePlanarHull };

/// Vertical extent [lower, upper] of the description over a planar point.
inline std::optional<std::pair<Rational, Rational>> vertical_extent(const SemialgebraicDescription& desc,
                                                                    const PlanarPoint& p)
{
    auto need = [](const VertexSpan& v) -> const VertexSpan& {
        if (!v.z_lower || !v.z_upper) throw Error("description has no heights at a vertex");
        return v;
    };
    if (const VertexSpan* v = desc.vertex(p)) return std::pair{*need(*v).z_lower, *v->z_upper};
    for (const auto& [a, b] : desc.edges) {
        if (!CellSet<Rational>::on_segment(a, b, p)) continue;
        const VertexSpan& va = need(*desc.vertex(a));
        const VertexSpan& vb = need(*desc.vertex(b));
        const Rational t = a.x == b.x ? (p.y - a.y) / (b.y - a.y) : (p.x - a.x) / (b.x - a.x);
        return std::pair{(1 - t) * *va.z_lower + t * *vb.z_lower, (1 - t) * *va.z_upper + t * *vb.z_upper};
    }
    for (const auto& r : desc.rectangles)
        if (p.x >= r.x0 && p.x <= r.x1 && p.y >= r.y0 && p.y <= r.y1)
            return std::pair{r.q_lower.height(p.x, p.y), r.q_upper.height(p.x, p.y)};
    return std::nullopt;
}

inline Membership membership_3d(const SemialgebraicDescription& desc, const TriPoint& p)
{
    const auto ext = vertical_extent(desc, project(p));
    if (!ext) return Membership::OutsidePlanarHull;
    return p.z >= ext->first && p.z <= ext->second ? Membership::Inside : Membership::OutsideHeight;
}

/// conv of the lower and upper lifts of the two endpoints of a kept edge,
/// listed around the quadrilateral: lower a, lower b, upper b, upper a.
inline std::array<TriPoint, 4> vertical_square_restriction(const SemialgebraicDescription& desc,
                                                           const std::pair<PlanarPoint, PlanarPoint>& edge)
{
    const VertexSpan* a = desc.vertex(edge.first);
    const VertexSpan* b = desc.vertex(edge.second);
    if (!a || !b || !a->z_lower || !b->z_lower) throw Error("edge endpoints carry no heights");
    return {lift(edge.first, *a->z_lower), lift(edge.second, *b->z_lower), lift(edge.second, *b->z_upper),
            lift(edge.first, *a->z_upper)};
}

}  // namespace rch
