#pragma once

#include <random>
#include <vector>

#include "geomatch/core.hpp"

namespace testutil {

// Small random instances for oracle comparisons. Sizes are drawn so that
// |S| * |T| stays within the brute-force limit when cap20 is set.
inline geomatch::ManyToManyInstance random_instance(std::mt19937_64& rng, int max_side,
                                                    bool cap20 = false) {
    auto draw = [&](int lo, int hi) {
        return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    };
    int ns = draw(1, max_side), nt = draw(1, max_side);
    while (cap20 && ns * nt > 20) {
        ns = draw(1, max_side);
        nt = draw(1, max_side);
    }
    geomatch::GenSpec spec;
    spec.dist = geomatch::Distribution::UniformSquare;
    spec.ns = ns;
    spec.nt = nt;
    spec.seed = rng();
    return geomatch::generate(spec);
}

inline geomatch::ManyToManyInstance uniform_instance(int ns, int nt, std::uint64_t seed) {
    geomatch::GenSpec spec;
    spec.dist = geomatch::Distribution::UniformSquare;
    spec.ns = ns;
    spec.nt = nt;
    spec.seed = seed;
    return geomatch::generate(spec);
}

}  // namespace testutil
