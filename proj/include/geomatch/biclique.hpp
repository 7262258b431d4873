#pragma once

// Per-weight-class bi-clique covers of the dense original-vs-original edge
// block. A fair-split-tree pair decomposition partitions all S x T pairs into
// box pairs; a box pair is emitted once its distance spread is within the
// configured factor (or entirely below the weight floor), and dropped once it
// lies entirely above the clamp. Every biclique carries one integer weight:
// the class representative of its center distance.

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "geomatch/core.hpp"

namespace geomatch {

/// Geometric ladder of integer weight classes: class i holds the integers in
/// [(1+eps)^i, (1+eps)^(i+1)); w is the largest of them. Classes without an
/// integer are not materialized.
class WeightLadder {
  public:
    struct WeightClass {
        int ladder_index = 0;
        std::int64_t lo = 1;  // smallest integer in the class
        std::int64_t w = 1;   // largest integer in the class
    };

    WeightLadder() = default;

    WeightLadder(double eps, std::int64_t max_value) : eps_(eps) {
        if (eps <= 0.0 || eps > 1.0) throw std::invalid_argument("WeightLadder: eps in (0,1]");
        const double base = 1.0 + eps;
        for (int i = 0;; ++i) {
            double lo_d = std::pow(base, i);
            double hi_d = std::pow(base, i + 1);
            auto lo = static_cast<std::int64_t>(std::ceil(lo_d));
            auto w = static_cast<std::int64_t>(std::ceil(hi_d)) - 1;
            if (lo > max_value) break;
            if (w >= lo) classes_.push_back({i, lo, w});
        }
        if (classes_.empty()) throw std::logic_error("WeightLadder: empty ladder");
    }

    const WeightClass& class_of(std::int64_t a) const {
        if (a < 1 || classes_.empty() || a > classes_.back().w)
            throw std::invalid_argument("WeightLadder: weight out of range");
        int lo = 0, hi = static_cast<int>(classes_.size()) - 1;
        while (lo < hi) {
            int mid = (lo + hi + 1) / 2;
            if (classes_[mid].lo <= a)
                lo = mid;
            else
                hi = mid - 1;
        }
        return classes_[lo];
    }

    std::int64_t snapped(std::int64_t a) const { return class_of(a).w; }
    const std::vector<WeightClass>& classes() const { return classes_; }
    double eps() const { return eps_; }

  private:
    double eps_ = 0.0;
    std::vector<WeightClass> classes_;
};

struct CoverParams {
    double eps_spread = 0.25;    // max in-biclique distance spread minus one
    double clamp = 0.0;          // weights above this are excluded
    double floor_value = 0.0;    // weights below this are raised to it
    double unit = 0.0;           // original-cost value of one integer step
    std::int64_t granularity = 1;  // integer value of the floor

    /// Per-distance integer weight before class snapping; nullopt = excluded.
    std::optional<std::int64_t> int_of(double d) const {
        if (d > clamp) return std::nullopt;
        if (d <= floor_value || unit <= 0.0) return granularity;
        auto a = static_cast<std::int64_t>(std::ceil(d / unit));
        return std::max(a, granularity);
    }
};

struct Biclique {
    int class_index = 0;          // ladder index
    std::int64_t w = 0;           // snapped integer weight shared by all pairs
    std::vector<int> left;        // S point ids, ascending
    std::vector<int> right;       // T point ids, ascending
};

class BicliqueCover {
  public:
    std::vector<Biclique> cliques;
    std::vector<std::vector<int>> left_memb;   // per S point: clique ids
    std::vector<std::vector<int>> right_memb;  // per T point: clique ids

    std::int64_t total_size() const {
        std::int64_t s = 0;
        for (const auto& c : cliques)
            s += static_cast<std::int64_t>(c.left.size()) + static_cast<std::int64_t>(c.right.size());
        return s;
    }

    std::optional<int> clique_of(int u, int v) const {
        for (int id : left_memb[u]) {
            const auto& q = cliques[id].right;
            if (std::binary_search(q.begin(), q.end(), v)) return id;
        }
        return std::nullopt;
    }

    int count_containing(int u, int v) const {
        int count = 0;
        for (int id : left_memb[u]) {
            const auto& q = cliques[id].right;
            if (std::binary_search(q.begin(), q.end(), v)) ++count;
        }
        return count;
    }

    std::optional<std::int64_t> rounded_weight(int u, int v) const {
        auto id = clique_of(u, v);
        if (!id) return std::nullopt;
        return cliques[*id].w;
    }
};

namespace detail {

struct SplitTree {
    struct Node {
        double lo[2], hi[2];
        int begin = 0, end = 0;
        int left = -1, right = -1;
        bool leaf() const { return left < 0; }
        double extent(int axis) const { return hi[axis] - lo[axis]; }
        double max_extent() const { return std::max(extent(0), extent(1)); }
        Point center() const { return {(lo[0] + hi[0]) / 2, (lo[1] + hi[1]) / 2}; }
    };

    explicit SplitTree(const std::vector<Point>& pts) : pts_(&pts) {
        order.resize(pts.size());
        for (int i = 0; i < static_cast<int>(pts.size()); ++i) order[i] = i;
        root = build(0, static_cast<int>(pts.size()));
    }

    int build(int begin, int end) {
        Node node;
        node.begin = begin;
        node.end = end;
        node.lo[0] = node.lo[1] = std::numeric_limits<double>::infinity();
        node.hi[0] = node.hi[1] = -std::numeric_limits<double>::infinity();
        for (int k = begin; k < end; ++k) {
            const Point& p = (*pts_)[order[k]];
            node.lo[0] = std::min(node.lo[0], p.x);
            node.hi[0] = std::max(node.hi[0], p.x);
            node.lo[1] = std::min(node.lo[1], p.y);
            node.hi[1] = std::max(node.hi[1], p.y);
        }
        int id = static_cast<int>(nodes.size());
        nodes.push_back(node);
        if (node.max_extent() <= 0.0) return id;  // all points coincide

        int axis = node.extent(0) >= node.extent(1) ? 0 : 1;
        double mid = node.lo[axis] + node.extent(axis) / 2;
        auto coord = [&](int idx) { return axis == 0 ? (*pts_)[idx].x : (*pts_)[idx].y; };
        auto it = std::partition(order.begin() + begin, order.begin() + end,
                                 [&](int idx) { return coord(idx) <= mid; });
        int split = static_cast<int>(it - order.begin());
        if (split == begin || split == end) {
            // Degenerate midpoint; fall back to a median split.
            split = (begin + end) / 2;
            std::nth_element(order.begin() + begin, order.begin() + split, order.begin() + end,
                             [&](int a, int b) {
                                 return coord(a) < coord(b) || (coord(a) == coord(b) && a < b);
                             });
        }
        int l = build(begin, split);
        int r = build(split, end);
        nodes[id].left = l;
        nodes[id].right = r;
        return id;
    }

    const std::vector<Point>* pts_;
    std::vector<Node> nodes;
    std::vector<int> order;
    int root = 0;
};

inline double box_min_dist(const SplitTree::Node& a, const SplitTree::Node& b) {
    double dx = std::max({0.0, a.lo[0] - b.hi[0], b.lo[0] - a.hi[0]});
    double dy = std::max({0.0, a.lo[1] - b.hi[1], b.lo[1] - a.hi[1]});
    return std::sqrt(dx * dx + dy * dy);
}

inline double box_max_dist(const SplitTree::Node& a, const SplitTree::Node& b) {
    double dx = std::max(a.hi[0] - b.lo[0], b.hi[0] - a.lo[0]);
    double dy = std::max(a.hi[1] - b.lo[1], b.hi[1] - a.lo[1]);
    return std::sqrt(dx * dx + dy * dy);
}

}  // namespace detail

/// Builds the cover. Each included S x T pair lands in exactly one biclique;
/// pairs with distance above params.clamp land in none.
inline BicliqueCover build_cover(const std::vector<Point>& s_pts, const std::vector<Point>& t_pts,
                                 const CoverParams& params, const WeightLadder& ladder) {
    if (params.eps_spread <= 0.0) throw std::invalid_argument("build_cover: eps_spread must be positive");

    detail::SplitTree ls(s_pts), rs(t_pts);
    BicliqueCover cover;
    cover.left_memb.resize(s_pts.size());
    cover.right_memb.resize(t_pts.size());

    std::vector<std::pair<int, int>> stack{{ls.root, rs.root}};
    while (!stack.empty()) {
        auto [ai, bi] = stack.back();
        stack.pop_back();
        const auto& a = ls.nodes[ai];
        const auto& b = rs.nodes[bi];
        double dmin = detail::box_min_dist(a, b);
        if (dmin > params.clamp) continue;  // every pair excluded
        double dmax = detail::box_max_dist(a, b);
        bool tight = dmax <= params.floor_value || dmax <= dmin * (1.0 + params.eps_spread);
        if (dmax <= params.clamp && tight) {
            Biclique c;
            double rep = distance(a.center(), b.center());
            std::int64_t a_rep = *params.int_of(std::min(rep, params.clamp));
            const auto& cls = ladder.class_of(a_rep);
            c.class_index = cls.ladder_index;
            c.w = cls.w;
            c.left.assign(ls.order.begin() + a.begin, ls.order.begin() + a.end);
            c.right.assign(rs.order.begin() + b.begin, rs.order.begin() + b.end);
            std::sort(c.left.begin(), c.left.end());
            std::sort(c.right.begin(), c.right.end());
            int id = static_cast<int>(cover.cliques.size());
            for (int u : c.left) cover.left_memb[u].push_back(id);
            for (int v : c.right) cover.right_memb[v].push_back(id);
            cover.cliques.push_back(std::move(c));
            continue;
        }
        // Split the side with the larger box; leaves force the other side.
        bool split_a = !a.leaf() && (b.leaf() || a.max_extent() >= b.max_extent());
        if (split_a) {
            stack.push_back({ls.nodes[ai].left, bi});
            stack.push_back({ls.nodes[ai].right, bi});
        } else {
            stack.push_back({ai, rs.nodes[bi].left});
            stack.push_back({ai, rs.nodes[bi].right});
        }
    }
    return cover;
}

}  // namespace geomatch
