#pragma once

// Phase structure for step 1 of the scaling solver: a depth-first search that
// collects a maximal set of vertex-disjoint augmenting paths of eligible
// edges, probing the dense blocks through per-biclique ordered sets.
//
// Duals are fixed for the lifetime of one instance. An unmatched edge (u, v)
// is eligible iff y(u) + y(v) == c(u, v) + 1, so within biclique j the
// eligible partners of u are exactly the set members with key
// c_j + 1 - y(v) == y(u). Trees hold unmarked vertices only and are built
// the first time a search touches them; marking a vertex removes it from
// every built tree it belongs to.

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "geomatch/scaling.hpp"

namespace geomatch {

enum class PathStep { Done, Extended, Skip };

class MatchDS {
  public:
    MatchDS(const ScaleCosts& costs, const std::vector<std::int64_t>& y_r,
            const std::vector<std::int64_t>& y_b, const std::vector<int>& match_r,
            const std::vector<int>& match_b)
        : costs_(costs),
          g_(*costs.norm->g),
          cover_(costs.norm->cover),
          y_r_(y_r),
          y_b_(y_b),
          match_r_(match_r),
          match_b_(match_b),
          trees_(cover_.cliques.size()),
          cursor_(g_.ns(), 0),
          e1_failed_(g_.nt(), 0),
          marked_r_(g_.n(), 0),
          marked_b_(g_.n(), 0) {
        const std::int64_t key_base = costs_.e1_cost() + 1;
        for (int b = g_.nt(); b < g_.n(); ++b) t1_.insert({key_base - y_b_[b], b});
    }

    /// Maximal set of vertex-disjoint augmenting paths of eligible edges.
    /// Paths are vertex sequences [r, b, r, b, ..., r, b]; even-position
    /// edges are the ones to match. The matching itself is not modified.
    std::vector<std::vector<int>> find_maximal_aps() {
        std::vector<std::vector<int>> found;
        for (int root = 0; root < g_.n(); ++root) {
            if (match_r_[root] >= 0 || marked_r_[root]) continue;
            marked_r_[root] = 1;
            path_ = {root};
            while (!path_.empty()) {
                int rt = path_.back();
                PathStep step = g_.r_is_r0(rt) ? extend_from_r0(rt) : extend_from_r1(rt);
                if (step == PathStep::Done) {
                    found.push_back(path_);
                    path_.clear();
                } else if (step == PathStep::Skip) {
                    // No extension from rt: drop it and the edge that led here.
                    path_.pop_back();
                    if (!path_.empty()) path_.pop_back();
                }
            }
        }
        return found;
    }

    /// One probe of vertex v from the current path end. Public for tests.
    PathStep augmenting_path_step(int v) {
        if (marked_b_[v]) return PathStep::Skip;
        mark_b(v);
        if (match_b_[v] < 0) {
            path_.push_back(v);
            return PathStep::Done;
        }
        int w = match_b_[v];
        marked_r_[w] = 1;
        path_.push_back(v);
        path_.push_back(w);
        return PathStep::Extended;
    }

    // Test hooks.
    bool tree_built(int clique_id) const { return trees_[clique_id] != nullptr; }
    const std::set<std::pair<std::int64_t, int>>& t1() const { return t1_; }
    std::vector<int>& path() { return path_; }

  private:
    using KeySet = std::set<std::pair<std::int64_t, int>>;

    KeySet& tree(int id) {
        if (!trees_[id]) {
            auto t = std::make_unique<KeySet>();
            const std::int64_t key_base = costs_.clique_cost(id) + 1;
            for (int v : cover_.cliques[id].right)
                if (!marked_b_[v]) t->insert({key_base - y_b_[v], v});
            trees_[id] = std::move(t);
        }
        return *trees_[id];
    }

    void mark_b(int v) {
        marked_b_[v] = 1;
        if (g_.b_is_b0(v)) {
            for (int id : cover_.right_memb[v]) {
                if (!trees_[id]) continue;  // unbuilt trees filter at build time
                const std::int64_t key = costs_.clique_cost(id) + 1 - y_b_[v];
                trees_[id]->erase({key, v});
            }
        } else {
            t1_.erase({costs_.e1_cost() + 1 - y_b_[v], v});
        }
    }

    PathStep extend_from_r0(int rt) {
        // Copy edge first, then the biclique sets in membership order.
        int bh = g_.nt() + rt;
        if (!marked_b_[bh] && y_r_[rt] + y_b_[bh] == costs_.e2_cost(rt) + 1) {
            PathStep s = augmenting_path_step(bh);
            if (s != PathStep::Skip) return s;
        }
        auto& memb = cover_.left_memb[rt];
        while (cursor_[rt] < static_cast<int>(memb.size())) {
            int id = memb[cursor_[rt]];
            KeySet& t = tree(id);
            auto it = t.lower_bound({y_r_[rt], -1});
            if (it != t.end() && it->first == y_r_[rt]) {
                int v = it->second;
                if (marked_b_[v]) {  // trees hold unmarked vertices only
                    t.erase(it);
                    continue;
                }
                return augmenting_path_step(v);
            }
            ++cursor_[rt];  // this set is exhausted for rt
        }
        return PathStep::Skip;
    }

    PathStep extend_from_r1(int rt) {
        int orig = rt - g_.ns();
        if (!marked_b_[orig] && y_r_[rt] + y_b_[orig] == costs_.e3_cost(orig) + 1) {
            PathStep s = augmenting_path_step(orig);
            if (s != PathStep::Skip) return s;
        }
        if (!e1_failed_[orig]) {
            auto it = t1_.lower_bound({y_r_[rt], -1});
            if (it != t1_.end() && it->first == y_r_[rt]) return augmenting_path_step(it->second);
            e1_failed_[orig] = 1;
        }
        return PathStep::Skip;
    }

    const ScaleCosts& costs_;
    const ReducedGraph& g_;
    const BicliqueCover& cover_;
    const std::vector<std::int64_t>& y_r_;
    const std::vector<std::int64_t>& y_b_;
    const std::vector<int>& match_r_;
    const std::vector<int>& match_b_;

    std::vector<std::unique_ptr<KeySet>> trees_;  // per biclique, lazily built
    KeySet t1_;                                   // copy-clique partners
    std::vector<int> cursor_;                     // membership-list consumption per R0 vertex
    std::vector<char> e1_failed_;                 // per R1 vertex
    std::vector<char> marked_r_, marked_b_;
    std::vector<int> path_;
};

}  // namespace geomatch
