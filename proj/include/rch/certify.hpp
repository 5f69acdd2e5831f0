#pragma once

#include "rch/laminate.hpp"
#include "rch/triangular_hull.hpp"

#include <limits>
#include <optional>
#include <queue>

namespace rch {

struct CertifyResult {
    std::optional<Laminate> laminate;  // present when the pairing reached eps
    double value = 0;                  // best <nu, d_K^2> seen
    std::size_t splits = 0;
};

namespace detail {

class Certifier {
public:
    Certifier(const SemialgebraicDescription& desc, const HeightField& h, const PlanarGrid& g)
        : desc_(desc), h_(h), g_(g)
    {
    }

    CertifyResult run(const TriPoint& target, double eps, std::size_t max_splits)
    {
        CertifyResult out;
        Laminate lam(target);
        std::priority_queue<std::pair<double, std::size_t>> queue;  // (weight * d^2, slot)
        std::vector<double> cost{mass(lam, 0)};
        double total = cost[0];
        queue.push({key(lam, 0, cost[0]), 0});
        out.value = total;
        while (total > eps && lam.splits() < max_splits && !queue.empty()) {
            const std::size_t slot = queue.top().second;
            queue.pop();
            if (cost[slot] == 0) continue;
            const std::size_t before = lam.size();
            if (!expand(lam, slot)) continue;
            // slot was rewritten, slots >= before are new
            total -= cost[slot];
            cost.resize(lam.size());
            auto refresh = [&](std::size_t s) {
                cost[s] = mass(lam, s);
                total += cost[s];
                queue.push({key(lam, s, cost[s]), s});
            };
            refresh(slot);
            for (std::size_t s = before; s < lam.size(); ++s) refresh(s);
        }
        // fresh sum, the running total drifts
        out.value = lam.pair([&](const TriPoint& p) { return squared_distance_to_set(p, desc_.points); });
        out.splits = lam.splits();
        if (out.value <= eps) out.laminate = std::move(lam);
        return out;
    }

private:
    double mass(const Laminate& lam, std::size_t slot) const
    {
        const auto& n = lam.leaf(slot);
        return n.weight.get_d() * squared_distance_to_set(n.point, desc_.points);
    }

    // Generic leaves go first; they only need a few structural splits.
    static double key(const Laminate& lam, std::size_t slot, double c)
    {
        return lam.leaf(slot).tag < 0 && c > 0 ? std::numeric_limits<double>::infinity() : c;
    }

    const ProvNode& node(long id) const { return h_.nodes[static_cast<std::size_t>(id)]; }

    std::size_t vid(const PlanarPoint& p) const { return g_.id(*g_.x_index(p.x), *g_.y_index(p.y)); }

    // Height at the same fraction s between the lower and upper surface.
    static Rational at_fraction(const VertexSpan& v, const Rational& s) { return *v.z_lower + s * (*v.z_upper - *v.z_lower); }

    static Rational fraction(const Rational& z, const Rational& lo, const Rational& up)
    {
        return up == lo ? Rational(0) : (z - lo) / (up - lo);
    }

    bool expand(Laminate& lam, std::size_t slot) const
    {
        const auto& leaf = lam.leaf(slot);
        const TriPoint p = leaf.point;
        if (leaf.tag >= 0) {
            const ProvNode& n = node(leaf.tag);
            if (n.source == Source::Input) return false;
            lam.split_in_place(slot, node(n.a).point, node(n.b).point, n.mu, n.a, n.b);
            return true;
        }
        const PlanarPoint pp = project(p);
        if (const VertexSpan* v = desc_.vertex(pp)) {
            const std::size_t id = vid(pp);
            const long up = h_.upper[id], lo = h_.lower[id];
            if (p.z == *v->z_upper) return lam.set_tag(slot, up), true;
            if (p.z == *v->z_lower) return lam.set_tag(slot, lo), true;
            const Rational mu = (p.z - *v->z_lower) / (*v->z_upper - *v->z_lower);
            lam.split_in_place(slot, node(up).point, node(lo).point, mu, up, lo);
            return true;
        }
        for (const auto& [a, b] : desc_.edges) {
            if (!CellSet<Rational>::on_segment(a, b, pp)) continue;
            const VertexSpan& va = *desc_.vertex(a);
            const VertexSpan& vb = *desc_.vertex(b);
            const Rational t = a.x == b.x ? (pp.y - a.y) / (b.y - a.y) : (pp.x - a.x) / (b.x - a.x);
            const Rational lo = (1 - t) * *va.z_lower + t * *vb.z_lower;
            const Rational up = (1 - t) * *va.z_upper + t * *vb.z_upper;
            const Rational s = fraction(p.z, lo, up);
            lam.split_in_place(slot, lift(a, at_fraction(va, s)), lift(b, at_fraction(vb, s)), 1 - t);
            return true;
        }
        for (const auto& r : desc_.rectangles) {
            if (pp.x < r.x0 || pp.x > r.x1 || pp.y < r.y0 || pp.y > r.y1) continue;
            // ruling along x at the leaf's y, ending on the two vertical edges
            const Rational s = fraction(p.z, r.q_lower.height(pp.x, pp.y), r.q_upper.height(pp.x, pp.y));
            auto end = [&](const Rational& x) {
                const Rational lo = r.q_lower.height(x, pp.y), up = r.q_upper.height(x, pp.y);
                return TriPoint{x, pp.y, lo + s * (up - lo)};
            };
            lam.split_in_place(slot, end(r.x0), end(r.x1), (r.x1 - pp.x) / (r.x1 - r.x0));
            return true;
        }
        return false;
    }

    const SemialgebraicDescription& desc_;
    const HeightField& h_;
    const PlanarGrid& g_;
};

}  // namespace detail

/// Greedy certificate search: split the leaf carrying the most d_K^2 mass,
/// first along the description's cells (face ruling, edge, vertical), then
/// along the provenance of the vertex heights, until <nu, d_K^2> <= eps or
/// max_splits. Targets outside the description yield no laminate.
inline CertifyResult certify(const HullResult& hull, const TriPoint& target, double eps, std::size_t max_splits = 4096)
{
    if (membership_3d(hull.desc, target) != Membership::Inside) {
        CertifyResult out;
        out.value = squared_distance_to_set(target, hull.desc.points);
        if (out.value <= eps) out.laminate = Laminate(target);
        return out;
    }
    return detail::Certifier(hull.desc, hull.heights, hull.planar.grid).run(target, eps, max_splits);
}

/// Rebuilds the inner heights from the description's points; they must match it.
inline CertifyResult certify(const SemialgebraicDescription& desc, const TriPoint& target, double eps,
                             std::size_t max_splits = 4096)
{
    HullOptions o;
    o.oracle_resolution = 0;
    const HullResult hull = compute_hull(desc.points, o);
    if (hull.desc.vertices.size() != desc.vertices.size()) throw Error("description does not match its points");
    for (std::size_t i = 0; i < desc.vertices.size(); ++i) {
        const auto& a = desc.vertices[i];
        const auto& b = hull.desc.vertices[i];
        if (!(a.at == b.at) || a.z_lower != b.z_lower || a.z_upper != b.z_upper)
            throw Error("description does not match its points");
    }
    return certify(hull, target, eps, max_splits);
}

}  // namespace rch
