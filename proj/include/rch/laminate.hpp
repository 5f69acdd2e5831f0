#pragma once

#include "rch/geometry.hpp"
#include "rch/t4.hpp"

#include <map>
#include <type_traits>
#include <vector>

namespace rch {

class NotOnSegment : public Error {
public:
    NotOnSegment() : Error("leaf point is not the given convex combination") {}
};

class NotRankOne : public Error {
public:
    NotRankOne() : Error("split endpoints are not rank-one connected") {}
};

class BadRatio : public Error {
public:
    BadRatio() : Error("split ratio must lie strictly between 0 and 1") {}
};

/// Laminate of finite order stored as its splitting tree.
///
/// Node 0 is the root (the barycenter). Splitting a leaf with point
/// lambda*a + (1-lambda)*b creates two children, first at a with weight
/// lambda*w and second at b with weight (1-lambda)*w. Values are immutable;
/// split() returns a new laminate.
class Laminate {
public:
    struct Node {
        TriPoint point;
        Rational weight;
        int parent = -1;
        int first = -1;
        int second = -1;
        Rational ratio;  // lambda of the split, for internal nodes
        int depth = 0;
        long tag = -1;   // caller data, e.g. a provenance id
    };

    explicit Laminate(TriPoint root, long tag = -1)
    {
        nodes_.push_back({std::move(root), Rational(1), -1, -1, -1, 0, 0, tag});
        leaves_.push_back(0);
    }

    const std::vector<Node>& nodes() const { return nodes_; }
    /// Node ids of the support, in creation order of the slots.
    const std::vector<int>& leaves() const { return leaves_; }
    const Node& leaf(std::size_t i) const { return nodes_[leaves_.at(i)]; }
    std::size_t size() const { return leaves_.size(); }
    std::size_t splits() const { return log_.size(); }
    const TriPoint& root() const { return nodes_[0].point; }

    int order() const
    {
        int d = 0;
        for (int l : leaves_) d = std::max(d, nodes_[l].depth);
        return d;
    }

    Laminate split(std::size_t leaf_index, const TriPoint& a, const TriPoint& b, const Rational& lambda,
                   long tag_a = -1, long tag_b = -1) const
    {
        Laminate out = *this;
        out.split_in_place(leaf_index, a, b, lambda, tag_a, tag_b);
        return out;
    }

    void split_in_place(std::size_t leaf_index, const TriPoint& a, const TriPoint& b, const Rational& lambda,
                        long tag_a = -1, long tag_b = -1)
    {
        if (lambda <= 0 || lambda >= 1) throw BadRatio();
        if (!rank_one_connected(a, b)) throw NotRankOne();
        const int id = leaves_.at(leaf_index);
        if (!(lambda * a + (1 - lambda) * b == nodes_[id].point)) throw NotOnSegment();
        const Rational w = nodes_[id].weight;
        const int depth = nodes_[id].depth + 1;
        const int c1 = static_cast<int>(nodes_.size());
        nodes_.push_back({a, lambda * w, id, -1, -1, 0, depth, tag_a});
        nodes_.push_back({b, (1 - lambda) * w, id, -1, -1, 0, depth, tag_b});
        nodes_[id].first = c1;
        nodes_[id].second = c1 + 1;
        nodes_[id].ratio = lambda;
        leaves_[leaf_index] = c1;
        leaves_.push_back(c1 + 1);
        log_.push_back(leaf_index);
    }

    void set_tag(std::size_t leaf_index, long tag) { nodes_[leaves_.at(leaf_index)].tag = tag; }

    /// The laminate after its first n splits.
    Laminate truncated(std::size_t n) const
    {
        Laminate out(nodes_[0].point, nodes_[0].tag);
        // split s created nodes 2s+1 and 2s+2
        for (std::size_t s = 0; s < n && s < log_.size(); ++s) {
            const Node& a = nodes_[2 * s + 1];
            const Node& b = nodes_[2 * s + 2];
            out.split_in_place(log_[s], a.point, b.point, nodes_[a.parent].ratio, a.tag, b.tag);
        }
        return out;
    }

    TriPoint barycenter() const
    {
        TriPoint s{0, 0, 0};
        for (int l : leaves_) s = s + nodes_[l].weight * nodes_[l].point;
        return s;
    }

    /// Sum of weight * f(point); exact when f returns Rational.
    template <class Fn>
    auto pair(Fn&& f) const
    {
        using Raw = std::decay_t<decltype(f(nodes_[0].point))>;
        using R = std::conditional_t<std::is_arithmetic_v<Raw>, double, Rational>;
        R acc{0};
        for (int l : leaves_) {
            if constexpr (std::is_same_v<R, double>)
                acc += nodes_[l].weight.get_d() * f(nodes_[l].point);
            else
                acc += nodes_[l].weight * f(nodes_[l].point);
        }
        return acc;
    }

    /// Support as a measure: equal points merged.
    std::map<TriPoint, Rational> measure() const
    {
        std::map<TriPoint, Rational> m;
        for (int l : leaves_) m[nodes_[l].point] += nodes_[l].weight;
        return m;
    }

private:
    std::vector<Node> nodes_;
    std::vector<int> leaves_;
    std::vector<std::size_t> log_;  // leaf slot split at each step
};

/// The splitting sequence that walks a lifted T4 around its square:
/// start at corner Q[start] and repeatedly split the corner leaf into
/// K[i-1] and Q[i-1]. After s splits the corner leaf has weight
/// prod of (1 - lambda) along the walk.
inline Laminate t4_cycle_laminate(const T4Lift& l, int start, int splits)
{
    const auto k = l.lifted_K();
    const auto q = l.Q();
    Laminate lam(q[start]);
    std::size_t corner_slot = 0;
    int i = start;
    for (int s = 0; s < splits; ++s) {
        const int prev = (i + 3) % 4;
        const Rational& mu = l.t4.lambda[i];
        if (mu == 1) break;  // the corner coincides with K, nothing left to split
        lam.split_in_place(corner_slot, k[prev], q[prev], mu);
        // the corner child is the second one, appended at the end
        corner_slot = lam.size() - 1;
        i = prev;
    }
    return lam;
}

}  // namespace rch
