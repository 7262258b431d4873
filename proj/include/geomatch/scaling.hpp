#pragma once

// Integer weight normalization for the bit-scaling solver, the scale driver,
// and the exact integer validators for 1-feasible matchings.
//
// Normalization clamps distances above a 2-approximate cover cost C, raises
// everything below eps*C/(2n) to that floor, and maps the kept range onto
// integers (the floor maps to `granularity`, so one integer step is worth
// floor/granularity in original cost). Integers are then snapped to weight
// classes. Dense-block weights come from the bi-clique cover, so all the
// pairs of one biclique share one snapped weight; copy edges are rounded
// individually.

#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "geomatch/biclique.hpp"
#include "geomatch/nearest.hpp"
#include "geomatch/reduction.hpp"

namespace geomatch {

struct NormalizedInstance {
    const ReducedGraph* g = nullptr;
    double eps = 0.0;
    std::int64_t granularity = 1;
    double approx_cost = 0.0;  // C, with OPT <= C <= 2 OPT
    CoverParams params;        // clamp/floor/unit shared with the cover build
    WeightLadder ladder;
    BicliqueCover cover;

    std::vector<std::int64_t> e2_w, e3_w;  // snapped, always included
    std::vector<int> e2_class, e3_class;
    std::int64_t e1_w = 1;  // shared by every copy-clique edge
    int e1_class = 0;
    std::int64_t max_weight = 1;  // N, the largest included snapped weight

    /// Snapped integer weight of the (r, b) edge; nullopt when the edge does
    /// not exist or is excluded by the clamp.
    std::optional<std::int64_t> int_weight(int r, int b) const {
        const int ns = g->ns(), nt = g->nt();
        if (r < ns) {
            if (b < nt) return cover.rounded_weight(r, b);
            if (b - nt == r) return e2_w[r];
            return std::nullopt;
        }
        if (b >= nt) return e1_w;
        if (r - ns == b) return e3_w[b];
        return std::nullopt;
    }

    /// Independent per-edge rounding (no class snapping, no cover); the
    /// baseline the cover weights are measured against.
    std::optional<std::int64_t> raw_int_of_dist(double d) const { return params.int_of(d); }
};

inline NormalizedInstance normalize(const ReducedGraph& g, double eps,
                                    std::int64_t granularity = 1, double eps_spread = 0.0) {
    if (eps <= 0.0 || eps > 1.0) throw std::invalid_argument("normalize: eps in (0,1]");
    if (granularity < 1) throw std::invalid_argument("normalize: granularity >= 1");

    NormalizedInstance norm;
    norm.g = &g;
    norm.eps = eps;
    norm.granularity = granularity;
    norm.approx_cost = cover_cost(g.inst, greedy_two_approx(g.inst));

    const double C = norm.approx_cost;
    const int n = g.n();
    norm.params.eps_spread = eps_spread > 0.0 ? eps_spread : eps;
    norm.params.clamp = C;
    norm.params.floor_value = eps * C / (2.0 * n);
    norm.params.unit = norm.params.floor_value / static_cast<double>(granularity);
    norm.params.granularity = granularity;

    std::int64_t max_a = granularity;
    if (norm.params.unit > 0.0)
        max_a = std::max<std::int64_t>(
            max_a, static_cast<std::int64_t>(std::ceil(C / norm.params.unit)) + 1);
    norm.ladder = WeightLadder(eps, max_a);

    norm.cover = build_cover(g.inst.s, g.inst.t, norm.params, norm.ladder);

    auto snap = [&](double d) {
        auto a = norm.params.int_of(d);
        const auto& cls = norm.ladder.class_of(*a);
        return std::pair<std::int64_t, int>{cls.w, cls.ladder_index};
    };
    norm.e2_w.resize(g.ns());
    norm.e2_class.resize(g.ns());
    for (int i = 0; i < g.ns(); ++i) {
        auto [w, c] = snap(g.nn_s_dist[i]);
        norm.e2_w[i] = w;
        norm.e2_class[i] = c;
    }
    norm.e3_w.resize(g.nt());
    norm.e3_class.resize(g.nt());
    for (int j = 0; j < g.nt(); ++j) {
        auto [w, c] = snap(g.nn_t_dist[j]);
        norm.e3_w[j] = w;
        norm.e3_class[j] = c;
    }
    auto [e1w, e1c] = snap(0.0);
    norm.e1_w = e1w;
    norm.e1_class = e1c;

    norm.max_weight = norm.e1_w;
    for (auto w : norm.e2_w) norm.max_weight = std::max(norm.max_weight, w);
    for (auto w : norm.e3_w) norm.max_weight = std::max(norm.max_weight, w);
    for (const auto& c : norm.cover.cliques) norm.max_weight = std::max(norm.max_weight, c.w);
    return norm;
}

/// Runs the scales: scale i uses the most significant i bits of the costs
/// scaled by (n + 1).
struct ScaleDriver {
    int n = 1;            // vertices per side
    std::int64_t N = 1;   // largest edge weight
    int k = 1;            // number of scales

    ScaleDriver() = default;
    ScaleDriver(int n_, std::int64_t N_) : n(n_), N(N_) {
        if (n < 1 || N < 1) throw std::invalid_argument("ScaleDriver: n and N must be positive");
        k = static_cast<int>(std::bit_width(static_cast<std::uint64_t>(n + 1) *
                                            static_cast<std::uint64_t>(N)));
    }

    std::int64_t cbar(std::int64_t w) const { return static_cast<std::int64_t>(n + 1) * w; }
    std::int64_t scale_cost(std::int64_t w, int scale) const {
        return cbar(w) >> (k - scale);
    }
};

/// Cost view of one scale.
struct ScaleCosts {
    const NormalizedInstance* norm = nullptr;
    ScaleDriver driver;
    int scale = 1;

    std::int64_t of_weight(std::int64_t w) const { return driver.scale_cost(w, scale); }
    std::optional<std::int64_t> cost(int r, int b) const {
        auto w = norm->int_weight(r, b);
        if (!w) return std::nullopt;
        return of_weight(*w);
    }
    std::int64_t clique_cost(int id) const { return of_weight(norm->cover.cliques[id].w); }
    std::int64_t e1_cost() const { return of_weight(norm->e1_w); }
    std::int64_t e2_cost(int i) const { return of_weight(norm->e2_w[i]); }
    std::int64_t e3_cost(int j) const { return of_weight(norm->e3_w[j]); }
};

/// Dual transform applied between scales.
inline void scale_duals(std::vector<std::int64_t>& y) {
    for (auto& v : y) v = 2 * v - 1;
}

/// Exact integer check of the relaxed feasibility conditions: every included
/// edge satisfies y(u) + y(v) <= c + 1, every matched edge satisfies
/// y(u) + y(v) == c. Full enumeration; test-sized inputs only.
inline bool is_one_feasible(const ScaleCosts& costs, const std::vector<int>& match_r,
                            const std::vector<std::int64_t>& y_r,
                            const std::vector<std::int64_t>& y_b) {
    const int n = costs.norm->g->n();
    for (int r = 0; r < n; ++r) {
        for (int b = 0; b < n; ++b) {
            auto c = costs.cost(r, b);
            bool matched = match_r[r] == b;
            if (!c) {
                if (matched) return false;  // matched edge must be included
                continue;
            }
            std::int64_t sum = y_r[r] + y_b[b];
            if (sum > *c + 1) return false;
            if (matched && sum != *c) return false;
        }
    }
    return true;
}

/// True iff cost(any) >= cost(one_opt) - n under the given scale costs.
inline bool one_optimal_gap_check(const ScaleCosts& costs, const std::vector<int>& match_one_opt,
                                  const std::vector<int>& match_any) {
    const int n = costs.norm->g->n();
    std::int64_t c_opt = 0, c_any = 0;
    for (int r = 0; r < n; ++r) {
        c_opt += *costs.cost(r, match_one_opt[r]);
        c_any += *costs.cost(r, match_any[r]);
    }
    return c_any >= c_opt - n;
}

}  // namespace geomatch
