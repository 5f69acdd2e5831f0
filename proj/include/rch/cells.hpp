#pragma once

#include "rch/geometry.hpp"

#include <set>
#include <utility>
#include <vector>

namespace rch {

/// A closed planar set given as a union of closed cells of a line arrangement:
/// isolated vertices, segments, and convex polygons.
///
/// Edges store their endpoints in lexicographic order. Faces are convex
/// polygons listed counterclockwise starting from their lexicographically
/// smallest vertex, so equal cells compare equal.
template <class F>
struct CellSet {
    using P = Point2<F>;
    using Edge = std::pair<P, P>;
    using Face = std::vector<P>;

    std::set<P> vertices;
    std::set<Edge> edges;
    std::set<Face> faces;

    static Edge make_edge(P a, P b)
    {
        if (b < a) std::swap(a, b);
        return {std::move(a), std::move(b)};
    }

    /// Rotates a counterclockwise polygon to start at its smallest vertex.
    static Face canonical_face(Face f)
    {
        auto it = std::min_element(f.begin(), f.end());
        std::rotate(f.begin(), it, f.end());
        return f;
    }

    friend bool operator==(const CellSet& a, const CellSet& b)
    {
        return a.vertices == b.vertices && a.edges == b.edges && a.faces == b.faces;
    }

    bool contains(const P& p) const
    {
        if (vertices.count(p)) return true;
        for (const auto& [a, b] : edges)
            if (on_segment(a, b, p)) return true;
        for (const auto& f : faces)
            if (in_convex_polygon(f, p)) return true;
        return false;
    }

    static bool on_segment(const P& a, const P& b, const P& p)
    {
        if (field_sign(cross(b - a, p - a)) != 0) return false;
        return field_sign(dot(p - a, p - b)) <= 0;
    }

    static bool in_convex_polygon(const Face& f, const P& p)
    {
        for (std::size_t i = 0; i < f.size(); ++i) {
            const P& a = f[i];
            const P& b = f[(i + 1) % f.size()];
            if (field_sign(cross(b - a, p - a)) < 0) return false;
        }
        return true;
    }

    /// Vertices of the faces (the "2-cell region" vertex set).
    std::set<P> face_vertices() const
    {
        std::set<P> out;
        for (const auto& f : faces) out.insert(f.begin(), f.end());
        return out;
    }
};

}  // namespace rch
