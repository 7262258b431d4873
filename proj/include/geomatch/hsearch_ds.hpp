#pragma once

// Closest-pair structure for step 2 of the scaling solver. Tracks the sets
// R' (forest side, grows) and B' (outside the forest, shrinks) and reports
// the pair (u, v) in R' x B' minimizing c(u, v) - sigma_u - sigma_v over the
// included edges.
//
// Within one biclique every edge has the same cost, so its best pair is
// (argmax sigma over its R' members, argmax sigma over its B' members); the
// copy clique works the same way. Copy edges live in their own priority set.
// A global heap holds one candidate per source; entries go stale when a B
// vertex leaves and are re-validated against their source on pop.

#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "geomatch/scaling.hpp"

namespace geomatch {

class HSearchDS {
  public:
    struct Cand {
        int r = -1;
        int b = -1;
        std::int64_t slack = 0;
    };

    HSearchDS(const ScaleCosts& costs, const std::vector<std::int64_t>& y_b)
        : costs_(costs),
          g_(*costs.norm->g),
          cover_(costs.norm->cover),
          sigma_r_(g_.n(), 0),
          sigma_b_(y_b),
          in_r_(g_.n(), 0),
          in_bp_(g_.n(), 1),
          clique_(cover_.cliques.size()) {
        for (int b = g_.nt(); b < g_.n(); ++b) h1b_.push({sigma_b_[b], -b});
    }

    void insert_r(int r, std::int64_t sigma) {
        if (in_r_[r]) throw std::logic_error("HSearchDS: vertex already in R'");
        in_r_[r] = 1;
        sigma_r_[r] = sigma;
        const std::pair<std::int64_t, int> key{sigma, -r};
        if (g_.r_is_r0(r)) {
            for (int id : cover_.left_memb[r]) {
                CliqueState& st = state(id);
                st.hr.push(key);
                // The candidate only changes when the new vertex takes the top.
                if (st.hr.top() == key) push_clique_candidate(id);
            }
            int bh = g_.nt() + r;
            if (in_bp_[bh]) push_edge23(r, bh, costs_.e2_cost(r));
        } else {
            h1r_.push(key);
            if (h1r_.top() == key) push_e1_candidate();
            int orig = r - g_.ns();
            if (in_bp_[orig]) push_edge23(r, orig, costs_.e3_cost(orig));
        }
    }

    void remove_b(int b) {
        if (!in_bp_[b]) throw std::logic_error("HSearchDS: vertex not in B'");
        in_bp_[b] = 0;  // entries referencing b die lazily on pop
    }

    /// The paired transition of one search step.
    void update_closest_pair(int r, std::int64_t sigma, int b) {
        remove_b(b);
        insert_r(r, sigma);
    }

    std::optional<Cand> global_min() {
        while (!h_.empty()) {
            Entry e = h_.top();
            h_.pop();
            if (e.src == kSrcEdge) {
                // Copy edge: alive iff its B endpoint is still outside the forest.
                if (in_bp_[e.b]) return Cand{e.r, e.b, e.slack};
                continue;
            }
            auto cur = e.src == kSrcE1 ? e1_candidate() : clique_candidate(e.src);
            if (!cur) continue;
            if (cur->r == e.r && cur->b == e.b && cur->slack == e.slack) {
                // Keep the source represented; the candidate usually changes
                // right after this step and revalidates lazily.
                h_.push(e);
                return cur;
            }
            h_.push({cur->slack, e.src, cur->r, cur->b});
        }
        return std::nullopt;
    }

    bool in_rprime(int r) const { return in_r_[r] != 0; }
    bool in_bprime(int b) const { return in_bp_[b] != 0; }
    std::int64_t sigma_r(int r) const { return sigma_r_[r]; }
    std::int64_t sigma_b(int b) const { return sigma_b_[b]; }

    /// Linear-scan reference over all included live pairs.
    std::optional<Cand> scan_min() const {
        std::optional<Cand> best;
        for (int r = 0; r < g_.n(); ++r) {
            if (!in_r_[r]) continue;
            for (int b = 0; b < g_.n(); ++b) {
                if (!in_bp_[b]) continue;
                auto c = costs_.cost(r, b);
                if (!c) continue;
                Cand cand{r, b, *c - sigma_r_[r] - sigma_b_[b]};
                if (!best || cand_better(cand, *best)) best = cand;
            }
        }
        return best;
    }

  private:
    static constexpr int kSrcE1 = -1;
    static constexpr int kSrcEdge = -2;

    struct Entry {
        std::int64_t slack;
        int src;  // clique id, kSrcE1, or kSrcEdge
        int r, b;
        bool operator>(const Entry& o) const {
            if (slack != o.slack) return slack > o.slack;
            if (r != o.r) return r > o.r;
            return b > o.b;
        }
    };

    struct CliqueState {
        // Max-heaps on sigma; ties prefer the lower vertex index.
        std::priority_queue<std::pair<std::int64_t, int>> hr, hb;
    };

    static bool cand_better(const Cand& a, const Cand& b) {
        if (a.slack != b.slack) return a.slack < b.slack;
        if (a.r != b.r) return a.r < b.r;
        return a.b < b.b;
    }

    CliqueState& state(int id) {
        if (!clique_[id]) {
            auto st = std::make_unique<CliqueState>();
            std::vector<std::pair<std::int64_t, int>> live;
            live.reserve(cover_.cliques[id].right.size());
            for (int v : cover_.cliques[id].right)
                if (in_bp_[v]) live.push_back({sigma_b_[v], -v});
            st->hb = decltype(st->hb)(std::less<>{}, std::move(live));
            clique_[id] = std::move(st);
        }
        return *clique_[id];
    }

    std::optional<Cand> clique_candidate(int id) {
        if (!clique_[id]) return std::nullopt;
        CliqueState& st = *clique_[id];
        if (st.hr.empty()) return std::nullopt;
        while (!st.hb.empty() && !in_bp_[-st.hb.top().second]) st.hb.pop();
        if (st.hb.empty()) return std::nullopt;
        int r = -st.hr.top().second, b = -st.hb.top().second;
        return Cand{r, b, costs_.clique_cost(id) - sigma_r_[r] - sigma_b_[b]};
    }

    std::optional<Cand> e1_candidate() {
        if (h1r_.empty()) return std::nullopt;
        while (!h1b_.empty() && !in_bp_[-h1b_.top().second]) h1b_.pop();
        if (h1b_.empty()) return std::nullopt;
        int r = -h1r_.top().second, b = -h1b_.top().second;
        return Cand{r, b, costs_.e1_cost() - sigma_r_[r] - sigma_b_[b]};
    }

    void push_clique_candidate(int id) {
        if (auto c = clique_candidate(id)) h_.push({c->slack, id, c->r, c->b});
    }
    void push_e1_candidate() {
        if (auto c = e1_candidate()) h_.push({c->slack, kSrcE1, c->r, c->b});
    }
    void push_edge23(int r, int b, std::int64_t cost) {
        h_.push({cost - sigma_r_[r] - sigma_b_[b], kSrcEdge, r, b});
    }

    const ScaleCosts& costs_;
    const ReducedGraph& g_;
    const BicliqueCover& cover_;
    std::vector<std::int64_t> sigma_r_, sigma_b_;
    std::vector<char> in_r_, in_bp_;
    std::vector<std::unique_ptr<CliqueState>> clique_;  // built on first touch
    std::priority_queue<std::pair<std::int64_t, int>> h1r_, h1b_;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> h_;
};

}  // namespace geomatch
