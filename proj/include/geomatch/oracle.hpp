#pragma once

// Ground-truth reference solvers for tests: exhaustive edge-subset search for
// minimum-cost covers, and a dense shortest-path Hungarian solver on explicit
// matrices. Both are written independently of the production solvers.

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "geomatch/core.hpp"
#include "geomatch/reduction.hpp"

namespace geomatch {

/// Square weight matrix over R x B with optional absent entries.
struct ExplicitGraph {
    int n = 0;
    std::vector<double> w;        // n*n, row-major by R vertex
    std::vector<std::uint8_t> present;

    std::optional<double> weight(int r, int b) const {
        if (!present[r * n + b]) return std::nullopt;
        return w[r * n + b];
    }
    void set(int r, int b, double value) {
        w[r * n + b] = value;
        present[r * n + b] = 1;
    }
};

inline ExplicitGraph materialize(const ReducedGraph& g) {
    if (g.n() > 400) throw std::invalid_argument("materialize: instance too large");
    ExplicitGraph eg;
    eg.n = g.n();
    eg.w.assign(static_cast<std::size_t>(eg.n) * eg.n, 0.0);
    eg.present.assign(static_cast<std::size_t>(eg.n) * eg.n, 0);
    for (int r = 0; r < eg.n; ++r)
        for (int b = 0; b < eg.n; ++b)
            if (auto c = edge_weight(g, r, b)) eg.set(r, b, *c);
    return eg;
}

namespace detail {

// Lexicographic order on the pair sequences encoded by two edge masks, where
// bit order equals (s, t) lexicographic edge order.
inline bool mask_pairs_less(std::uint32_t a, std::uint32_t b) {
    while (a != 0 || b != 0) {
        if (a == 0) return true;   // a is a strict prefix of b
        if (b == 0) return false;
        int ea = __builtin_ctz(a), eb = __builtin_ctz(b);
        if (ea != eb) return ea < eb;
        a &= a - 1;
        b &= b - 1;
    }
    return false;
}

}  // namespace detail

/// Enumerates every subset of S x T, keeps the valid covers, and returns a
/// minimum-cost one (lexicographically smallest pair list among exact ties).
/// Requires |S| * |T| <= 20.
inline std::pair<PairSet, double> brute_force_cover(const ManyToManyInstance& inst) {
    validate_instance(inst);
    const int ns = inst.ns(), nt = inst.nt(), m = ns * nt;
    if (m > 20) throw std::invalid_argument("brute_force_cover: instance too large");

    std::vector<double> wt(m);
    std::vector<std::uint32_t> sbit(m), tbit(m);
    for (int si = 0; si < ns; ++si)
        for (int ti = 0; ti < nt; ++ti) {
            int e = si * nt + ti;
            wt[e] = distance(inst.s[si], inst.t[ti]);
            sbit[e] = 1u << si;
            tbit[e] = 1u << ti;
        }

    const std::uint32_t full_s = (ns == 32) ? ~0u : ((1u << ns) - 1);
    const std::uint32_t full_t = (nt == 32) ? ~0u : ((1u << nt) - 1);
    const std::size_t count = std::size_t{1} << m;
    std::vector<double> cost(count, 0.0);
    std::vector<std::uint32_t> scov(count, 0), tcov(count, 0);

    double best_cost = std::numeric_limits<double>::infinity();
    std::uint32_t best_mask = 0;
    bool found = false;
    for (std::size_t mask = 1; mask < count; ++mask) {
        std::size_t low = mask & (~mask + 1);
        int e = __builtin_ctzll(mask);
        std::size_t rest = mask ^ low;
        cost[mask] = cost[rest] + wt[e];
        scov[mask] = scov[rest] | sbit[e];
        tcov[mask] = tcov[rest] | tbit[e];
        if (scov[mask] == full_s && tcov[mask] == full_t) {
            if (!found || cost[mask] < best_cost ||
                (cost[mask] == best_cost &&
                 detail::mask_pairs_less(static_cast<std::uint32_t>(mask), best_mask))) {
                best_cost = cost[mask];
                best_mask = static_cast<std::uint32_t>(mask);
                found = true;
            }
        }
    }
    PairSet best;
    for (int e = 0; e < m; ++e)
        if (best_mask & (1u << e)) best.insert(e / nt, e % nt);
    return {best, cover_cost(inst, best)};
}

/// Dense minimum-cost perfect matching (row-by-row shortest augmenting paths
/// with potentials). Throws if no perfect matching exists over present
/// entries.
inline std::pair<PerfectMatching, double> dense_hungarian(const ExplicitGraph& g) {
    const int n = g.n;
    const double INF = std::numeric_limits<double>::infinity();
    auto cost = [&](int r, int b) { return g.present[r * n + b] ? g.w[r * n + b] : INF; };

    std::vector<double> pot_r(n, 0.0), pot_b(n + 1, 0.0);
    std::vector<int> col_row(n + 1, -1);  // col_row[b] = row matched to column b

    for (int row = 0; row < n; ++row) {
        col_row[n] = row;  // virtual column hosting the row to insert
        int j0 = n;
        std::vector<double> minv(n, INF);
        std::vector<int> way(n, n);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = col_row[j0];
            double delta = INF;
            int j1 = -1;
            for (int j = 0; j < n; ++j) {
                if (used[j]) continue;
                double cur = cost(i0, j) - pot_r[i0] - pot_b[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            if (j1 < 0 || delta == INF)
                throw std::invalid_argument("dense_hungarian: no perfect matching");
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    pot_r[col_row[j]] += delta;
                    pot_b[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (col_row[j0] != -1);
        do {
            int j1 = way[j0];
            col_row[j0] = col_row[j1];
            j0 = j1;
        } while (j0 != n);
    }

    PerfectMatching pm;
    pm.r_to_b.assign(n, -1);
    double total = 0.0;
    for (int b = 0; b < n; ++b) {
        int r = col_row[b];
        pm.r_to_b[r] = b;
        auto c = g.weight(r, b);
        if (!c) throw std::invalid_argument("dense_hungarian: no perfect matching");
        total += *c;
    }
    return {pm, total};
}

}  // namespace geomatch
