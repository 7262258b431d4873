#pragma once

// Exact nearest-neighbor index over a planar point set (kd-tree), and the
// greedy cover that pairs every point with its nearest neighbor in the
// other set.

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

#include "geomatch/core.hpp"

namespace geomatch {

/// Immutable 2-d tree. Queries are exact; ties go to the lowest point index.
class NnIndex {
  public:
    struct Hit {
        int index = -1;
        double dist = 0.0;
    };

    explicit NnIndex(std::vector<Point> points) : pts_(std::move(points)) {
        if (pts_.empty()) throw std::invalid_argument("NnIndex: empty point set");
        ids_.resize(pts_.size());
        for (int i = 0; i < static_cast<int>(pts_.size()); ++i) ids_[i] = i;
        build(0, static_cast<int>(pts_.size()), 0);
    }

    Hit nearest(const Point& q) const {
        Best best;
        search(0, static_cast<int>(pts_.size()), 0, q, best);
        return {best.index, std::sqrt(best.d2)};
    }

    const std::vector<Point>& points() const { return pts_; }

  private:
    struct Best {
        double d2 = std::numeric_limits<double>::infinity();
        int index = -1;
    };

    // ids_[lo..hi) holds a subtree; the median element splits on axis.
    void build(int lo, int hi, int axis) {
        if (hi - lo <= 1) return;
        int mid = (lo + hi) / 2;
        auto coord = [&](int id) { return axis == 0 ? pts_[id].x : pts_[id].y; };
        std::nth_element(ids_.begin() + lo, ids_.begin() + mid, ids_.begin() + hi,
                         [&](int a, int b) {
                             double ca = coord(a), cb = coord(b);
                             return ca < cb || (ca == cb && a < b);
                         });
        build(lo, mid, 1 - axis);
        build(mid + 1, hi, 1 - axis);
    }

    void search(int lo, int hi, int axis, const Point& q, Best& best) const {
        if (lo >= hi) return;
        int mid = (lo + hi) / 2;
        int id = ids_[mid];
        double dx = q.x - pts_[id].x, dy = q.y - pts_[id].y;
        double d2 = dx * dx + dy * dy;
        if (d2 < best.d2 || (d2 == best.d2 && id < best.index)) best = {d2, id};

        double delta = (axis == 0 ? q.x - pts_[id].x : q.y - pts_[id].y);
        int nearLo = lo, nearHi = mid, farLo = mid + 1, farHi = hi;
        if (delta > 0) {
            std::swap(nearLo, farLo);
            std::swap(nearHi, farHi);
        }
        search(nearLo, nearHi, 1 - axis, q, best);
        // Visit the far side on exact ties too, to keep index tie-breaking exact.
        if (delta * delta <= best.d2) search(farLo, farHi, 1 - axis, q, best);
    }

    std::vector<Point> pts_;
    std::vector<int> ids_;
};

inline NnIndex build_nn(std::vector<Point> points) { return NnIndex(std::move(points)); }

/// Pairs each point of S with its nearest neighbor in T and vice versa.
/// The result is a valid cover of cost at most twice the optimum.
inline PairSet greedy_two_approx(const ManyToManyInstance& inst) {
    validate_instance(inst);
    NnIndex t_index(inst.t);
    NnIndex s_index(inst.s);
    PairSet m;
    for (int i = 0; i < inst.ns(); ++i) m.insert(i, t_index.nearest(inst.s[i]).index);
    for (int j = 0; j < inst.nt(); ++j) m.insert(s_index.nearest(inst.t[j]).index, j);
    return m;
}

}  // namespace geomatch
