#pragma once

// Exact minimum-cost perfect matching on the implicit reduced graph.
//
// Each Hungarian search grows a forest from the free R vertices. Instead of
// rewriting dual values on every adjustment, the search keeps a per-vertex
// weight sigma fixed at forest-entry time and a running shift Delta:
//   for u in R'(forest):        y(u) = sigma_u + Delta
//   for v in forest-side B:     y(v) = sigma_v - Delta
//   for v in B' (untouched):    y(v) = sigma_v
// The next admissible edge is the pair (u, v) in R' x B' minimizing
// c(u, v) - sigma_u - sigma_v; its slack minus Delta is the dual adjustment.
// Edges become admissible only through that event, so no floating-point
// equality test on recomputed duals is ever needed.
//
// The pair minimization runs on a composite structure: a pluggable engine for
// the dense original-vs-original block, two max-priority sets for the uniform
// zero-weight copy clique (max sigma on each side), and a min-priority set of
// the live original-to-copy edges.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "geomatch/reduction.hpp"

namespace geomatch {

struct CpCandidate {
    int r = -1;
    int b = -1;
    double slack = 0.0;
};

inline bool cp_better(const CpCandidate& a, const CpCandidate& b) {
    if (a.slack != b.slack) return a.slack < b.slack;
    if (a.r != b.r) return a.r < b.r;
    return a.b < b.b;
}

/// Engine for the dense R0 x B0 block under distance c(r,b) - sigma_r - sigma_b.
/// Red insertions carry their weight; blue removals are permanent for the
/// lifetime of one search.
class ID1Engine {
  public:
    virtual ~ID1Engine() = default;
    virtual void insert_red(int r0, double sigma_r) = 0;
    virtual void remove_blue(int b0) = 0;
    virtual std::optional<CpCandidate> global_min() const = 0;  // local indices
};

/// Maintained slack arrays: one pass over live B0 per insertion and per query.
class DenseSlackD1 : public ID1Engine {
  public:
    DenseSlackD1(const ReducedGraph& g, const std::vector<double>& sigma_b0)
        : g_(g),
          sigma_b_(sigma_b0),
          best_(g.nt(), std::numeric_limits<double>::infinity()),
          best_r_(g.nt(), -1),
          alive_(g.nt(), 1) {}

    void insert_red(int r0, double sigma_r) override {
        const Point p = g_.inst.s[r0];
        for (int b = 0; b < g_.nt(); ++b) {
            if (!alive_[b]) continue;
            double val = distance(p, g_.inst.t[b]) - sigma_r;
            if (val < best_[b] || (val == best_[b] && r0 < best_r_[b])) {
                best_[b] = val;
                best_r_[b] = r0;
            }
        }
    }

    void remove_blue(int b0) override { alive_[b0] = 0; }

    std::optional<CpCandidate> global_min() const override {
        std::optional<CpCandidate> best;
        for (int b = 0; b < g_.nt(); ++b) {
            if (!alive_[b] || best_r_[b] < 0) continue;
            CpCandidate c{best_r_[b], b, best_[b] - sigma_b_[b]};
            if (!best || cp_better(c, *best)) best = c;
        }
        return best;
    }

  private:
    const ReducedGraph& g_;
    const std::vector<double>& sigma_b_;
    std::vector<double> best_;
    std::vector<int> best_r_;
    std::vector<char> alive_;
};

using D1Factory = std::function<std::unique_ptr<ID1Engine>(const ReducedGraph&,
                                                           const std::vector<double>&)>;

/// Composite closest-pair structure over all four edge classes, tracking the
/// forest sets R' and B' of one search.
class ClosestPairEngine {
  public:
    ClosestPairEngine(const ReducedGraph& g, const std::vector<double>& y_b,
                      const D1Factory& d1_factory = {})
        : g_(g),
          sigma_r_(g.n(), 0.0),
          sigma_b_(y_b),
          in_r_(g.n(), 0),
          in_bprime_(g.n(), 1) {
        sigma_b0_.assign(sigma_b_.begin(), sigma_b_.begin() + g.nt());
        d1_ = d1_factory ? d1_factory(g, sigma_b0_)
                         : std::make_unique<DenseSlackD1>(g, sigma_b0_);
        for (int b = g.nt(); b < g.n(); ++b) h1b_.push({sigma_b_[b], -b});
    }

    void add_r(int r, double sigma_r) {
        if (in_r_[r]) throw std::logic_error("ClosestPairEngine: vertex already in R'");
        in_r_[r] = 1;
        sigma_r_[r] = sigma_r;
        if (g_.r_is_r0(r)) {
            d1_->insert_red(r, sigma_r);
            int b = g_.nt() + r;  // its copy on the B side
            if (in_bprime_[b]) h23_.push({g_.nn_s_dist[r] - sigma_r - sigma_b_[b], r, b});
        } else {
            h1r_.push({sigma_r, -r});
            int b = r - g_.ns();  // original point on the B side
            if (in_bprime_[b]) h23_.push({g_.nn_t_dist[b] - sigma_r - sigma_b_[b], r, b});
        }
    }

    void remove_b(int b) {
        if (!in_bprime_[b]) throw std::logic_error("ClosestPairEngine: vertex not in B'");
        in_bprime_[b] = 0;
        if (g_.b_is_b0(b)) d1_->remove_blue(b);
        // Heap entries referencing b die lazily.
    }

    std::optional<CpCandidate> global_min() const {
        std::optional<CpCandidate> best = d1_global_min();

        // Zero-weight clique: slack = -(max sigma_r + max sigma_b). R entries
        // never leave R', so only the B heap needs pruning.
        prune_heap(h1b_, [&](int b) { return in_bprime_[b] != 0; });
        if (!h1r_.empty() && !h1b_.empty()) {
            int r = -h1r_.top().second, b = -h1b_.top().second;
            consider(best, {r, b, 0.0 - sigma_r_[r] - sigma_b_[b]});
        }

        while (!h23_.empty() && !in_bprime_[h23_.top().b]) h23_.pop();
        if (!h23_.empty()) {
            const Edge23& e = h23_.top();
            consider(best, {e.r, e.b, e.slack});
        }
        return best;
    }

    bool in_rprime(int r) const { return in_r_[r] != 0; }
    bool in_bprime(int b) const { return in_bprime_[b] != 0; }
    double sigma_r(int r) const { return sigma_r_[r]; }
    double sigma_b(int b) const { return sigma_b_[b]; }

    /// Reference scan over all live pairs; used by the checking wrapper.
    std::optional<CpCandidate> scan_min() const {
        std::optional<CpCandidate> best;
        for (int r = 0; r < g_.n(); ++r) {
            if (!in_r_[r]) continue;
            for (int b = 0; b < g_.n(); ++b) {
                if (!in_bprime_[b]) continue;
                auto c = edge_weight(g_, r, b);
                if (!c) continue;
                consider(best, {r, b, *c - sigma_r_[r] - sigma_b_[b]});
            }
        }
        return best;
    }

  private:
    struct Edge23 {
        double slack;
        int r, b;
        bool operator>(const Edge23& o) const {
            if (slack != o.slack) return slack > o.slack;
            if (r != o.r) return r > o.r;
            return b > o.b;
        }
    };

    std::optional<CpCandidate> d1_global_min() const {
        auto c = d1_->global_min();
        if (!c) return std::nullopt;
        return CpCandidate{c->r, c->b, c->slack};
    }

    static void consider(std::optional<CpCandidate>& best, const CpCandidate& c) {
        if (!best || cp_better(c, *best)) best = c;
    }

    template <class Pred>
    void prune_heap(std::priority_queue<std::pair<double, int>>& h, Pred alive) const {
        while (!h.empty() && !alive(-h.top().second)) h.pop();
    }

    const ReducedGraph& g_;
    std::vector<double> sigma_r_;
    std::vector<double> sigma_b_;
    std::vector<double> sigma_b0_;
    std::vector<char> in_r_, in_bprime_;
    std::unique_ptr<ID1Engine> d1_;
    // Max-heaps keyed by sigma; ties resolved toward the lowest vertex index.
    mutable std::priority_queue<std::pair<double, int>> h1r_, h1b_;
    mutable std::priority_queue<Edge23, std::vector<Edge23>, std::greater<Edge23>> h23_;
};

struct SearchTrace {
    std::vector<double> deltas;
    int path_edges = 0;
};

struct ExactOptions {
    bool greedy_clique_init = true;  // pre-match the zero-weight copy clique
    bool check_engine = false;       // cross-check every global_min against a scan
    D1Factory d1_factory;
    std::vector<SearchTrace>* trace = nullptr;
    // Called after every augmentation with (match_r, y_r, y_b).
    std::function<void(const std::vector<int>&, const std::vector<double>&,
                       const std::vector<double>&)>
        after_augment;
};

/// One Hungarian search: grows the forest until an augmenting path of
/// admissible edges reaches a free B vertex. Returns the path as vertices
/// [r0, b0, r1, b1, ..., rk, bk] where each (ri, bi) is to become matched;
/// updates the duals in place and leaves them feasible.
inline std::vector<int> hungarian_search(const ReducedGraph& g, const std::vector<int>& match_r,
                                         const std::vector<int>& match_b, std::vector<double>& y_r,
                                         std::vector<double>& y_b,
                                         const ExactOptions& opts = {}) {
    const int n = g.n();
    ClosestPairEngine engine(g, y_b, opts.d1_factory);

    std::vector<int> parent_b(n, -1);  // R vertex whose admissible edge reached b
    std::vector<int> added_r;
    std::vector<int> removed_b;
    double delta_total = 0.0;
    SearchTrace trace;

    bool any_free = false;
    for (int r = 0; r < n; ++r) {
        if (match_r[r] < 0) {
            engine.add_r(r, y_r[r]);
            added_r.push_back(r);
            any_free = true;
        }
    }
    if (!any_free) throw std::logic_error("hungarian_search: matching already perfect");

    int final_b = -1;
    while (true) {
        auto cand = engine.global_min();
        if (opts.check_engine) {
            // The reported slack must equal the scan minimum and the pair must
            // be live and achieve it; among ties the structures may pick a
            // different pair than the flat lexicographic scan.
            auto ref = engine.scan_min();
            bool ok = !cand && !ref;
            if (cand && ref && cand->slack == ref->slack && engine.in_rprime(cand->r) &&
                engine.in_bprime(cand->b)) {
                auto c = edge_weight(g, cand->r, cand->b);
                ok = c && *c - engine.sigma_r(cand->r) - engine.sigma_b(cand->b) == cand->slack;
            }
            if (!ok) throw std::logic_error("closest-pair engine disagrees with scan");
        }
        if (!cand) throw std::logic_error("hungarian_search: no candidate pair");
        double delta = cand->slack - delta_total;
        if (delta < 0) delta = 0;  // guards fp rounding in slack accumulation
        delta_total += delta;
        trace.deltas.push_back(delta);

        const int r = cand->r, b = cand->b;
        parent_b[b] = r;
        if (match_b[b] < 0) {
            final_b = b;
            engine.remove_b(b);
            removed_b.push_back(b);
            break;
        }
        const int w = match_b[b];
        y_b[b] = engine.sigma_b(b) + delta_total;  // sigma snapshot below subtracts Delta
        engine.remove_b(b);
        removed_b.push_back(b);
        engine.add_r(w, y_r[w] - delta_total);
        added_r.push_back(w);
    }

    // Materialize duals. R' entries: y = sigma + Delta. Forest B vertices
    // stored sigma (= y_at_entry + Delta_at_entry) into y_b when removed, so
    // subtracting the final Delta lands on y = sigma - Delta. The terminating
    // free vertex keeps its dual.
    for (int r : added_r) y_r[r] = engine.sigma_r(r) + delta_total;
    for (int b : removed_b)
        if (b != final_b) y_b[b] -= delta_total;

    // Recover the augmenting path.
    std::vector<int> path;
    int b = final_b;
    while (true) {
        int r = parent_b[b];
        path.push_back(b);
        path.push_back(r);
        if (match_r[r] < 0) break;
        b = match_r[r];
    }
    std::reverse(path.begin(), path.end());
    trace.path_edges = static_cast<int>(path.size()) - 1;
    if (opts.trace) opts.trace->push_back(std::move(trace));
    return path;
}

/// Net cost of augmenting along an alternating path (vertex sequence
/// r, b, r, b, ...). Throws if the path does not alternate with respect to
/// the matching.
inline double net_cost(const ReducedGraph& g, const std::vector<int>& match_r,
                       const std::vector<int>& path) {
    if (path.size() < 2 || path.size() % 2 != 0)
        throw std::invalid_argument("net_cost: path must alternate R,B,...,B");
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        int r, b;
        bool matched_edge = (i % 2 == 1);
        if (i % 2 == 0) {
            r = path[i];
            b = path[i + 1];
        } else {
            b = path[i];
            r = path[i + 1];
        }
        auto c = edge_weight(g, r, b);
        if (!c) throw std::invalid_argument("net_cost: path uses a nonexistent edge");
        bool is_matched = (match_r[r] == b);
        if (is_matched != matched_edge)
            throw std::invalid_argument("net_cost: path does not alternate with the matching");
        total += matched_edge ? -*c : *c;
    }
    return total;
}

/// Exact solver: repeated Hungarian searches until the matching is perfect.
inline PerfectMatching solve_exact(const ReducedGraph& g, const ExactOptions& opts = {}) {
    const int n = g.n();
    std::vector<int> match_r(n, -1), match_b(n, -1);
    std::vector<double> y_r(n, 0.0), y_b(n, 0.0);

    if (opts.greedy_clique_init) {
        // All copy-clique edges have weight zero and zero duals are tight on
        // them, so an arbitrary pairing is feasible.
        int k = std::min(g.ns(), g.nt());
        for (int j = 0; j < k; ++j) {
            match_r[g.ns() + j] = g.nt() + j;
            match_b[g.nt() + j] = g.ns() + j;
        }
    }

    int matched = 0;
    for (int r = 0; r < n; ++r)
        if (match_r[r] >= 0) ++matched;

    while (matched < n) {
        std::vector<int> path = hungarian_search(g, match_r, match_b, y_r, y_b, opts);
        for (std::size_t i = 0; i + 1 < path.size(); i += 2) {
            int r = path[i], b = path[i + 1];
            match_r[r] = b;
            match_b[b] = r;
        }
        ++matched;
        if (opts.after_augment) opts.after_augment(match_r, y_r, y_b);
    }

    PerfectMatching pm;
    pm.r_to_b = match_r;
    return pm;
}

/// Full-enumeration dual feasibility test: y(u) + y(v) <= c on every edge and
/// equality on matched edges, within tol.
inline bool dual_feasible(const ReducedGraph& g, const std::vector<int>& match_r,
                          const std::vector<double>& y_r, const std::vector<double>& y_b,
                          double tol) {
    for (int r = 0; r < g.n(); ++r) {
        for (int b = 0; b < g.n(); ++b) {
            auto c = edge_weight(g, r, b);
            if (!c) continue;
            double sum = y_r[r] + y_b[b];
            if (sum > *c + tol) return false;
            if (match_r[r] == b && std::abs(sum - *c) > tol) return false;
        }
    }
    return true;
}

// TODO: add a subquadratic D1 engine (dynamic bichromatic closest pair) behind
// ID1Engine; the dense slack engine makes every search quadratic.

}  // namespace geomatch
