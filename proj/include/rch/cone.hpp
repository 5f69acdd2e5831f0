#pragma once

#include "rch/geometry.hpp"

#include <string>
#include <vector>

namespace rch {

/// Finite set of pairwise non-parallel planar directions.
///
/// Directions are stored in canonical form: the first nonzero coordinate is
/// positive and, over the rationals, the vector is a primitive integer vector.
template <class F>
class Cone {
public:
    Cone() = default;

    explicit Cone(std::vector<Point2<F>> directions)
    {
        if (directions.empty()) throw Error("direction cone must be nonempty");
        for (auto& d : directions) {
            if (field_sign(d.x) == 0 && field_sign(d.y) == 0) throw Error("zero direction in cone");
            Point2<F> c = canonical(d);
            for (const auto& e : dirs_)
                if (field_sign(cross(c, e)) == 0) throw Error("parallel directions in cone");
            dirs_.push_back(std::move(c));
        }
    }

    /// The rank-one cone {(1,0), (0,1)} of diagonal and triangular matrices.
    static Cone axis() { return Cone({{F(1), F(0)}, {F(0), F(1)}}); }

    const std::vector<Point2<F>>& directions() const { return dirs_; }
    std::size_t size() const { return dirs_.size(); }
    const Point2<F>& operator[](std::size_t i) const { return dirs_[i]; }

    bool is_axis() const
    {
        if (dirs_.size() != 2) return false;
        auto horiz = [](const Point2<F>& d) { return field_sign(d.y) == 0; };
        auto vert = [](const Point2<F>& d) { return field_sign(d.x) == 0; };
        return (horiz(dirs_[0]) && vert(dirs_[1])) || (vert(dirs_[0]) && horiz(dirs_[1]));
    }

    /// Index of the direction parallel to v, or -1.
    int parallel_index(const Point2<F>& v) const
    {
        for (std::size_t i = 0; i < dirs_.size(); ++i)
            if (field_sign(cross(v, dirs_[i])) == 0) return static_cast<int>(i);
        return -1;
    }

private:
    static Point2<F> canonical(Point2<F> d)
    {
        if (field_sign(d.x) < 0 || (field_sign(d.x) == 0 && field_sign(d.y) < 0)) d = Point2<F>{-d.x, -d.y};
        if constexpr (std::is_same_v<F, Rational>) {
            const mpz_class l = lcm_of_denominators({d.x, d.y});
            Rational sx = d.x * l, sy = d.y * l;
            const mpz_class g = gcd_of_numerators({sx, sy});
            d = Point2<F>{sx / g, sy / g};
        }
        return d;
    }

    std::vector<Point2<F>> dirs_;
};

using DirectionCone = Cone<Rational>;

}  // namespace rch
