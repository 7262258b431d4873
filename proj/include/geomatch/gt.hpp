#pragma once

// Bit-scaling approximate solver. Each scale runs the match loop: step 1
// augments along a maximal set of eligible augmenting paths, step 2 runs one
// integer Hungarian search that adjusts duals until an eligible augmenting
// path appears and augments it. Duals carry across scales via y <- 2y - 1;
// the matching restarts empty each scale.

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "geomatch/hsearch_ds.hpp"
#include "geomatch/match_ds.hpp"
#include "geomatch/scaling.hpp"

namespace geomatch {

enum class GtStage { ScaleStart, AfterStep1, AfterStep2, ScaleEnd };

struct GtObserverPoint {
    int scale = 0;
    int round = 0;
    GtStage stage = GtStage::ScaleStart;
};

struct GtScaleStats {
    int scale = 0;
    int rounds = 0;                // step-1/step-2 iterations
    std::vector<int> matched_after_round;
};

struct GtOptions {
    bool check_hsearch = false;  // compare every reported pair against a scan
    std::vector<GtScaleStats>* stats = nullptr;
    std::function<void(const GtObserverPoint&, const ScaleCosts&, const std::vector<int>&,
                       const std::vector<std::int64_t>&, const std::vector<std::int64_t>&)>
        observer;
};

namespace detail {

inline void gt_augment(const std::vector<int>& path, std::vector<int>& match_r,
                       std::vector<int>& match_b, std::vector<std::int64_t>& y_b) {
    for (std::size_t i = 0; i + 1 < path.size(); i += 2) {
        int r = path[i], b = path[i + 1];
        match_r[r] = b;
        match_b[b] = r;
    }
    // Newly matched edges were eligible (sum == cost + 1); the decrement
    // restores equality on them and only loosens every other edge.
    for (std::size_t i = 1; i < path.size(); i += 2) --y_b[path[i]];
}

}  // namespace detail

/// One integer Hungarian search. Adjusts duals until an eligible augmenting
/// path exists and returns it (same vertex-sequence format as step 1);
/// does not augment.
inline std::vector<int> gt_hungarian_search(const ScaleCosts& costs,
                                            std::vector<std::int64_t>& y_r,
                                            std::vector<std::int64_t>& y_b,
                                            const std::vector<int>& match_r,
                                            const std::vector<int>& match_b,
                                            bool check = false) {
    const int n = costs.norm->g->n();
    HSearchDS ds(costs, y_b);
    std::vector<int> parent_b(n, -1);
    std::vector<int> added_r, removed_b;
    std::int64_t shift = 0;  // Delta

    for (int r = 0; r < n; ++r) {
        if (match_r[r] < 0) {
            ds.insert_r(r, y_r[r]);
            added_r.push_back(r);
        }
    }
    if (added_r.empty()) throw std::logic_error("gt_hungarian_search: matching already perfect");

    int final_b = -1;
    while (true) {
        auto cand = ds.global_min();
        if (check) {
            auto ref = ds.scan_min();
            bool ok = !cand && !ref;
            if (cand && ref && cand->slack == ref->slack && ds.in_rprime(cand->r) &&
                ds.in_bprime(cand->b)) {
                auto c = costs.cost(cand->r, cand->b);
                ok = c && *c - ds.sigma_r(cand->r) - ds.sigma_b(cand->b) == cand->slack;
            }
            if (!ok) throw std::logic_error("hsearch structure disagrees with scan");
        }
        if (!cand) throw std::logic_error("gt_hungarian_search: no live pair");
        // Eligibility needs y(u) + y(v) == c + 1, i.e. Delta == slack + 1.
        std::int64_t delta = cand->slack + 1 - shift;
        if (delta < 0) throw std::logic_error("gt_hungarian_search: negative dual adjustment");
        shift = cand->slack + 1;

        const int r = cand->r, b = cand->b;
        parent_b[b] = r;
        if (match_b[b] < 0) {
            final_b = b;
            break;
        }
        const int w = match_b[b];
        y_b[b] = ds.sigma_b(b) + shift;  // forest-entry snapshot; fixed up below
        ds.update_closest_pair(w, y_r[w] - shift, b);
        added_r.push_back(w);
        removed_b.push_back(b);
    }

    for (int r : added_r) y_r[r] = ds.sigma_r(r) + shift;
    for (int b : removed_b) y_b[b] -= shift;

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
    return path;
}

/// Runs the match loop at one scale until the matching is perfect. y must be
/// 1-feasible for these costs with an empty matching. Returns the number of
/// step-1/step-2 rounds.
inline int match_scale(const ScaleCosts& costs, std::vector<std::int64_t>& y_r,
                       std::vector<std::int64_t>& y_b, std::vector<int>& match_r,
                       std::vector<int>& match_b, const GtOptions& opts = {},
                       GtScaleStats* stats = nullptr) {
    const int n = costs.norm->g->n();
    int free_r = 0;
    for (int r = 0; r < n; ++r)
        if (match_r[r] < 0) ++free_r;

    auto notify = [&](GtStage stage, int round) {
        if (opts.observer)
            opts.observer({costs.scale, round, stage}, costs, match_r, y_r, y_b);
    };

    int rounds = 0;
    while (free_r > 0) {
        ++rounds;
        {
            MatchDS ds(costs, y_r, y_b, match_r, match_b);
            auto paths = ds.find_maximal_aps();
            for (const auto& p : paths) {
                detail::gt_augment(p, match_r, match_b, y_b);
                --free_r;
            }
        }
        notify(GtStage::AfterStep1, rounds);
        if (stats) stats->matched_after_round.push_back(n - free_r);
        if (free_r == 0) break;

        auto path = gt_hungarian_search(costs, y_r, y_b, match_r, match_b, opts.check_hsearch);
        detail::gt_augment(path, match_r, match_b, y_b);
        --free_r;
        notify(GtStage::AfterStep2, rounds);
    }
    if (stats) stats->rounds = rounds;
    return rounds;
}

struct GtResult {
    PerfectMatching matching;
    std::vector<GtScaleStats> scales;
};

/// Full scale loop over the normalized instance.
inline GtResult gt_solve(const NormalizedInstance& norm, const GtOptions& opts = {}) {
    const int n = norm.g->n();
    ScaleDriver driver(n, norm.max_weight);

    std::vector<std::int64_t> y_r(n, 0), y_b(n, 0);
    std::vector<int> match_r(n, -1), match_b(n, -1);
    GtResult result;

    for (int scale = 1; scale <= driver.k; ++scale) {
        if (scale > 1) {
            scale_duals(y_r);
            scale_duals(y_b);
        }
        match_r.assign(n, -1);
        match_b.assign(n, -1);
        ScaleCosts costs{&norm, driver, scale};
        if (opts.observer) opts.observer({scale, 0, GtStage::ScaleStart}, costs, match_r, y_r, y_b);
        GtScaleStats stats;
        stats.scale = scale;
        match_scale(costs, y_r, y_b, match_r, match_b, opts, &stats);
        if (opts.observer) opts.observer({scale, stats.rounds, GtStage::ScaleEnd}, costs, match_r, y_r, y_b);
        result.scales.push_back(std::move(stats));
    }
    result.matching.r_to_b = match_r;
    return result;
}

/// End-to-end pipeline: normalize with the internally calibrated epsilon,
/// run the scales, convert back to a cover over original distances.
struct GtPipelineResult {
    PairSet cover;
    double cost = 0.0;
    GtResult run;
};

inline std::int64_t gt_granularity(double eps) {
    return static_cast<std::int64_t>(std::ceil(8.0 / eps));
}

inline GtPipelineResult solve_gt_cover(const ReducedGraph& g, double eps,
                                       const GtOptions& opts = {}) {
    if (eps <= 0.0 || eps > 1.0) throw std::invalid_argument("solve_gt_cover: eps in (0,1]");
    // Quarter of the target ratio goes to class snapping and integer rounding,
    // half to the cover's distance spread; the product stays under 1 + eps.
    NormalizedInstance norm = normalize(g, eps / 4.0, gt_granularity(eps), eps / 2.0);
    GtPipelineResult out;
    out.run = gt_solve(norm, opts);
    out.cover = perfect_to_cover(g, out.run.matching);
    out.cost = cover_cost(g.inst, out.cover);
    return out;
}

}  // namespace geomatch
