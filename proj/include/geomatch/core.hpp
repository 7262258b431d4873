#pragma once

// Core problem model: planar point sets, pair covers and their costs,
// deterministic instance generation.

#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace geomatch {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline bool point_is_finite(const Point& p) {
    return std::isfinite(p.x) && std::isfinite(p.y);
}

/// Euclidean distance between two points.
inline double distance(const Point& a, const Point& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

/// Two planar point sets S and T. Both sides must be nonempty.
struct ManyToManyInstance {
    std::vector<Point> s;
    std::vector<Point> t;

    int ns() const { return static_cast<int>(s.size()); }
    int nt() const { return static_cast<int>(t.size()); }
    int total() const { return ns() + nt(); }
};

inline void validate_instance(const ManyToManyInstance& inst) {
    if (inst.s.empty() || inst.t.empty())
        throw std::invalid_argument("instance: both point sets must be nonempty");
    for (const Point& p : inst.s)
        if (!point_is_finite(p)) throw std::invalid_argument("instance: non-finite S coordinate");
    for (const Point& p : inst.t)
        if (!point_is_finite(p)) throw std::invalid_argument("instance: non-finite T coordinate");
}

using IndexPair = std::pair<int, int>;  // (S index, T index)

/// A set of (S index, T index) pairs. Insertion is idempotent and iteration
/// order is the canonical (s, t) lexicographic order.
class PairSet {
  public:
    void insert(int s_index, int t_index) { pairs_.emplace(s_index, t_index); }
    void insert(IndexPair p) { pairs_.insert(p); }
    bool contains(int s_index, int t_index) const {
        return pairs_.count({s_index, t_index}) > 0;
    }
    std::size_t size() const { return pairs_.size(); }
    bool empty() const { return pairs_.empty(); }

    auto begin() const { return pairs_.begin(); }
    auto end() const { return pairs_.end(); }

    bool operator==(const PairSet& other) const { return pairs_ == other.pairs_; }

  private:
    std::set<IndexPair> pairs_;
};

inline void check_pair_ranges(const ManyToManyInstance& inst, const PairSet& m) {
    for (const auto& [si, ti] : m) {
        if (si < 0 || si >= inst.ns() || ti < 0 || ti >= inst.nt())
            throw std::invalid_argument("pair set: index out of range");
    }
}

/// True iff every S index and every T index appears in at least one pair.
inline bool is_valid_cover(const ManyToManyInstance& inst, const PairSet& m) {
    check_pair_ranges(inst, m);
    std::vector<char> s_hit(inst.s.size(), 0), t_hit(inst.t.size(), 0);
    for (const auto& [si, ti] : m) {
        s_hit[si] = 1;
        t_hit[ti] = 1;
    }
    for (char h : s_hit)
        if (!h) return false;
    for (char h : t_hit)
        if (!h) return false;
    return true;
}

/// Sum of pair distances; each distinct pair contributes once.
inline double cover_cost(const ManyToManyInstance& inst, const PairSet& m) {
    check_pair_ranges(inst, m);
    double total = 0.0;
    for (const auto& [si, ti] : m) total += distance(inst.s[si], inst.t[ti]);
    return total;
}

// ---------------------------------------------------------------------------
// Instance generation.
//
// All randomness comes from mt19937_64 and explicit transforms (53-bit
// uniforms, Box-Muller normals) so instances are reproducible bit-for-bit
// from the seed alone.

enum class Distribution { UniformSquare, GaussianClusters, Grid };

struct GenSpec {
    Distribution dist = Distribution::UniformSquare;
    int ns = 1;
    int nt = 1;
    int clusters = 3;       // used by GaussianClusters
    std::uint64_t seed = 0;
};

namespace detail {

inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double gaussian(std::mt19937_64& rng) {
    // Box-Muller; one value per call keeps the stream layout obvious.
    double u1 = uniform01(rng);
    double u2 = uniform01(rng);
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace detail

inline ManyToManyInstance generate(const GenSpec& spec) {
    if (spec.ns < 1 || spec.nt < 1)
        throw std::invalid_argument("generate: sizes must be at least 1");
    if (spec.dist == Distribution::GaussianClusters && spec.clusters < 1)
        throw std::invalid_argument("generate: cluster count must be at least 1");

    ManyToManyInstance inst;
    inst.s.reserve(spec.ns);
    inst.t.reserve(spec.nt);
    std::mt19937_64 rng(spec.seed);

    switch (spec.dist) {
        case Distribution::UniformSquare: {
            for (int i = 0; i < spec.ns; ++i)
                inst.s.push_back({detail::uniform01(rng), detail::uniform01(rng)});
            for (int i = 0; i < spec.nt; ++i)
                inst.t.push_back({detail::uniform01(rng), detail::uniform01(rng)});
            break;
        }
        case Distribution::GaussianClusters: {
            std::vector<Point> centers(spec.clusters);
            for (auto& c : centers) c = {detail::uniform01(rng), detail::uniform01(rng)};
            const double sigma = 0.08;
            for (int i = 0; i < spec.ns; ++i) {
                const Point& c = centers[i % spec.clusters];
                inst.s.push_back({c.x + sigma * detail::gaussian(rng),
                                  c.y + sigma * detail::gaussian(rng)});
            }
            for (int i = 0; i < spec.nt; ++i) {
                const Point& c = centers[i % spec.clusters];
                inst.t.push_back({c.x + sigma * detail::gaussian(rng),
                                  c.y + sigma * detail::gaussian(rng)});
            }
            break;
        }
        case Distribution::Grid: {
            // S takes even lattice cells, T odd ones, so the union is distinct.
            const int need = std::max(spec.ns, spec.nt);
            int side = 1;
            while (side * side / 2 < need || side * side < spec.ns + spec.nt) ++side;
            for (int i = 0; i < spec.ns; ++i) {
                int cell = 2 * i;
                inst.s.push_back({static_cast<double>(cell % side),
                                  static_cast<double>(cell / side)});
            }
            for (int i = 0; i < spec.nt; ++i) {
                int cell = 2 * i + 1;
                inst.t.push_back({static_cast<double>(cell % side),
                                  static_cast<double>(cell / side)});
            }
            break;
        }
    }
    return inst;
}

}  // namespace geomatch
