#pragma once

#include "rch/quadric.hpp"

#include <string>
#include <vector>

namespace rch {

/// {x >= c}, {x <= c}, {y >= c} or {y <= c}.
struct HalfPlane {
    int axis = 0;
    Rational c;
    bool geq = true;

    bool contains(const Rational& x, const Rational& y) const
    {
        const Rational& v = axis == 0 ? x : y;
        return geq ? v >= c : v <= c;
    }
};

struct GluedPiece {
    std::vector<HalfPlane> region;  // empty: everywhere
    RankOnePoly f;

    bool contains(const Rational& x, const Rational& y) const
    {
        for (const auto& h : region)
            if (!h.contains(x, y)) return false;
        return true;
    }
};

/// Axis plane {x = c} or {y = c} across which two pieces meet.
struct GluingPlane {
    int axis = 0;
    Rational c;
    std::size_t a = 0, b = 0;
    bool continuous = false;  // f_a and f_b agree identically on the plane

    std::string str() const { return std::string(axis == 0 ? "x" : "y") + " = " + to_string(c); }
};

/// First-match dispatch over ordered pieces; a piece with no constraints acts as "elsewhere".
class PiecewiseQuadric {
public:
    PiecewiseQuadric(std::vector<GluedPiece> pieces, std::vector<GluingPlane> planes)
        : pieces_(std::move(pieces)), planes_(std::move(planes))
    {
        if (pieces_.empty()) throw Error("glued function needs at least one piece");
        for (auto& p : planes_) {
            if (p.a >= pieces_.size() || p.b >= pieces_.size()) throw Error("gluing plane names a missing piece");
            const RankOnePoly d = pieces_[p.a].f - pieces_[p.b].f;
            p.continuous = (p.axis == 0 ? d.restrict_x(p.c) : d.restrict_y(p.c)).is_zero();
        }
    }

    std::size_t piece_index(const Rational& x, const Rational& y) const
    {
        for (std::size_t i = 0; i < pieces_.size(); ++i)
            if (pieces_[i].contains(x, y)) return i;
        throw Error("no piece covers (" + to_string(x) + ", " + to_string(y) + ")");
    }

    Rational operator()(const TriPoint& p) const { return pieces_[piece_index(p.x, p.y)].f(p); }

    const std::vector<GluedPiece>& pieces() const { return pieces_; }
    const std::vector<GluingPlane>& gluing_planes() const { return planes_; }

    /// Declared planes where the pieces do not agree; continuity is not asserted there.
    std::vector<GluingPlane> advisory() const
    {
        std::vector<GluingPlane> out;
        for (const auto& p : planes_)
            if (!p.continuous) out.push_back(p);
        return out;
    }

private:
    std::vector<GluedPiece> pieces_;
    std::vector<GluingPlane> planes_;
};

/// Each plane is given as {axis, c, piece a, piece b}; continuity is checked exactly.
inline PiecewiseQuadric build_glued_function(std::vector<GluedPiece> pieces, std::vector<GluingPlane> planes)
{
    return PiecewiseQuadric(std::move(pieces), std::move(planes));
}

}  // namespace rch
