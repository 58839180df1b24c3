#pragma once

#include <cstdint>
#include <random>

#include "hcstab/metric.hpp"

namespace hcstab {

/// Uniform double in [0,1) from the top 53 bits; avoids the
/// implementation-defined std distributions so seeds reproduce everywhere.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_real(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

/// Uniform integer in [lo, hi], inclusive.
inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

/// n points sampled in a unit box under the euclidean norm.
FiniteMetricSpace random_metric(int n, std::uint64_t seed);

/// Random dendrogram with dyadic-rational merge heights, pushed through
/// eta. Dyadic heights keep average-linkage sums exactly representable.
Ultrametric random_ultrametric(int n, int depth, std::uint64_t seed);

}  // namespace hcstab
