#pragma once

// Implicit bipartite graph whose minimum-cost perfect matching has the same
// cost as the minimum-cost cover of the original instance, plus the
// conversions between covers and perfect matchings.
//
// Vertex layout (ns = |S|, nt = |T|, n = ns + nt per side):
//   R side: [0, ns)       R0, originals of S
//           [ns, n)       R1, copies of T      (flat r = ns + j)
//   B side: [0, nt)       B0, originals of T
//           [nt, n)       B1, copies of S      (flat b = nt + i)
// Edge classes:
//   E0 = R0 x B0, weight = point distance          (dense, implicit)
//   E1 = R1 x B1, weight = 0                       (dense, implicit)
//   E2 = {(i, nt+i)}, weight = S[i]'s nearest-T distance
//   E3 = {(ns+j, j)}, weight = T[j]'s nearest-S distance

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "geomatch/core.hpp"
#include "geomatch/nearest.hpp"

namespace geomatch {

enum class Side { R, B };
enum class Part { Part0, Part1 };

struct VertexId {
    Side side = Side::R;
    Part part = Part::Part0;
    int index = 0;  // index into S or T, per part conventions
};

struct ReducedGraph {
    ManyToManyInstance inst;
    std::vector<double> nn_s_dist;  // E2 weights, per S point
    std::vector<int> nn_s_idx;      // nearest T point per S point
    std::vector<double> nn_t_dist;  // E3 weights, per T point
    std::vector<int> nn_t_idx;      // nearest S point per T point

    int ns() const { return inst.ns(); }
    int nt() const { return inst.nt(); }
    int n() const { return inst.total(); }  // vertices per side

    bool r_is_r0(int r) const { return r < ns(); }
    bool b_is_b0(int b) const { return b < nt(); }

    VertexId r_vertex(int r) const {
        return r_is_r0(r) ? VertexId{Side::R, Part::Part0, r}
                          : VertexId{Side::R, Part::Part1, r - ns()};
    }
    VertexId b_vertex(int b) const {
        return b_is_b0(b) ? VertexId{Side::B, Part::Part0, b}
                          : VertexId{Side::B, Part::Part1, b - nt()};
    }
    int flat(const VertexId& v) const {
        if (v.side == Side::R) return v.part == Part::Part0 ? v.index : ns() + v.index;
        return v.part == Part::Part0 ? v.index : nt() + v.index;
    }
};

inline ReducedGraph build_reduced(const ManyToManyInstance& inst) {
    validate_instance(inst);
    ReducedGraph g;
    g.inst = inst;
    NnIndex t_index(inst.t);
    NnIndex s_index(inst.s);
    g.nn_s_dist.resize(inst.ns());
    g.nn_s_idx.resize(inst.ns());
    g.nn_t_dist.resize(inst.nt());
    g.nn_t_idx.resize(inst.nt());
    for (int i = 0; i < inst.ns(); ++i) {
        auto hit = t_index.nearest(inst.s[i]);
        g.nn_s_dist[i] = hit.dist;
        g.nn_s_idx[i] = hit.index;
    }
    for (int j = 0; j < inst.nt(); ++j) {
        auto hit = s_index.nearest(inst.t[j]);
        g.nn_t_dist[j] = hit.dist;
        g.nn_t_idx[j] = hit.index;
    }
    return g;
}

/// Weight of the (r, b) edge, or nullopt where no edge exists.
inline std::optional<double> edge_weight(const ReducedGraph& g, int r, int b) {
    if (r < 0 || r >= g.n() || b < 0 || b >= g.n())
        throw std::invalid_argument("edge_weight: vertex out of range");
    if (g.r_is_r0(r)) {
        if (g.b_is_b0(b)) return distance(g.inst.s[r], g.inst.t[b]);  // E0
        if (b - g.nt() == r) return g.nn_s_dist[r];                   // E2
        return std::nullopt;
    }
    if (!g.b_is_b0(b)) return 0.0;               // E1
    if (r - g.ns() == b) return g.nn_t_dist[b];  // E3
    return std::nullopt;
}

inline std::optional<double> edge_weight(const ReducedGraph& g, const VertexId& u,
                                         const VertexId& v) {
    if (u.side != Side::R || v.side != Side::B)
        throw std::invalid_argument("edge_weight: expects an R vertex and a B vertex");
    return edge_weight(g, g.flat(u), g.flat(v));
}

/// R-to-B assignment; r_to_b[r] is the B partner of R vertex r.
struct PerfectMatching {
    std::vector<int> r_to_b;

    std::vector<int> b_to_r() const {
        std::vector<int> inv(r_to_b.size(), -1);
        for (int r = 0; r < static_cast<int>(r_to_b.size()); ++r) {
            int b = r_to_b[r];
            if (b >= 0) inv[b] = r;
        }
        return inv;
    }
};

inline void validate_perfect(const ReducedGraph& g, const PerfectMatching& pm) {
    if (static_cast<int>(pm.r_to_b.size()) != g.n())
        throw std::invalid_argument("perfect matching: wrong size");
    std::vector<char> used(g.n(), 0);
    for (int r = 0; r < g.n(); ++r) {
        int b = pm.r_to_b[r];
        if (b < 0 || b >= g.n() || used[b])
            throw std::invalid_argument("perfect matching: not a bijection");
        used[b] = 1;
        if (!edge_weight(g, r, b))
            throw std::invalid_argument("perfect matching: uses a nonexistent edge");
    }
}

inline double matching_cost(const ReducedGraph& g, const PerfectMatching& pm) {
    double total = 0.0;
    for (int r = 0; r < g.n(); ++r) total += *edge_weight(g, r, pm.r_to_b[r]);
    return total;
}

/// Removes edges whose two endpoints both have degree >= 2 until none remain,
/// i.e. until every connected component of the pair graph is a star. Never
/// increases cost and preserves cover validity.
inline PairSet canonicalize_cover(const ManyToManyInstance& inst, const PairSet& m) {
    check_pair_ranges(inst, m);
    std::vector<int> deg_s(inst.ns(), 0), deg_t(inst.nt(), 0);
    for (const auto& [si, ti] : m) {
        ++deg_s[si];
        ++deg_t[ti];
    }
    // Eligibility (both endpoint degrees >= 2) only shrinks as edges are
    // removed, so one pass in canonical order is enough.
    PairSet out;
    for (const auto& [si, ti] : m) {
        if (deg_s[si] >= 2 && deg_t[ti] >= 2) {
            --deg_s[si];
            --deg_t[ti];
        } else {
            out.insert(si, ti);
        }
    }
    return out;
}

/// Converts a valid cover into a perfect matching of no greater cost.
inline PerfectMatching cover_to_perfect(const ReducedGraph& g, const PairSet& m) {
    if (!is_valid_cover(g.inst, m)) throw std::invalid_argument("cover_to_perfect: not a valid cover");
    PairSet canon = canonicalize_cover(g.inst, m);

    const int ns = g.ns(), nt = g.nt();
    std::vector<std::vector<int>> adj_s(ns), adj_t(nt);
    for (const auto& [si, ti] : canon) {
        adj_s[si].push_back(ti);
        adj_t[ti].push_back(si);
    }

    PerfectMatching pm;
    pm.r_to_b.assign(g.n(), -1);
    auto match = [&](int r, int b) { pm.r_to_b[r] = b; };

    // S-centered stars and single edges first, then T-centered stars; within
    // a star the lowest-index leaf takes the direct edge.
    for (int u = 0; u < ns; ++u) {
        if (adj_s[u].empty()) continue;
        if (adj_s[u].size() == 1) {
            int v = adj_s[u][0];
            if (adj_t[v].size() >= 2) continue;  // leaf of a T-centered star
            match(u, v);                   // E0 (u, v)
            match(ns + v, nt + u);         // E1 (v-hat, u-hat)
        } else {
            std::vector<int> leaves = adj_s[u];  // sorted: PairSet order is (s, t)
            match(u, leaves[0]);                 // E0 (u, v1)
            match(ns + leaves[0], nt + u);       // E1 (v1-hat, u-hat)
            for (std::size_t i = 1; i < leaves.size(); ++i)
                match(ns + leaves[i], leaves[i]);  // E3 (vi-hat, vi)
        }
    }
    for (int v = 0; v < nt; ++v) {
        if (adj_t[v].size() < 2) continue;
        const std::vector<int>& leaves = adj_t[v];
        match(leaves[0], v);            // E0 (u1, v)
        match(ns + v, nt + leaves[0]);  // E1 (v-hat, u1-hat)
        for (std::size_t i = 1; i < leaves.size(); ++i)
            match(leaves[i], nt + leaves[i]);  // E2 (ui, ui-hat)
    }
    validate_perfect(g, pm);
    return pm;
}

/// Converts a perfect matching into a valid cover of no greater cost.
inline PairSet perfect_to_cover(const ReducedGraph& g, const PerfectMatching& pm) {
    validate_perfect(g, pm);
    PairSet m;
    const int ns = g.ns(), nt = g.nt();
    for (int u = 0; u < ns; ++u) {
        int b = pm.r_to_b[u];
        if (b < nt)
            m.insert(u, b);               // matched into B0
        else
            m.insert(u, g.nn_s_idx[u]);   // matched to its own copy
    }
    std::vector<int> inv = pm.b_to_r();
    for (int v = 0; v < nt; ++v) {
        int r = inv[v];
        if (r < ns)
            m.insert(r, v);
        else
            m.insert(g.nn_t_idx[v], v);
    }
    return m;
}

}  // namespace geomatch
