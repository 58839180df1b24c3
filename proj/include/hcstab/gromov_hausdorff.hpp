#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hcstab/metric.hpp"

namespace hcstab {

/// Relation between two point sets covering both sides.
struct Correspondence {
    std::vector<std::pair<int, int>> pairs;
};

struct GHResult {
    double value = 0.0;
    Correspondence witness;
    bool exact = false;
    std::uint64_t nodes_explored = 0;
    double lower = 0.0;  // best certified lower bound (= value when exact)
};

/// sup over pairs of pairs of |d_X - d_Y|; throws NotACorrespondence on a
/// coverage violation.
double distortion(const Correspondence& tau, const FiniteMetricSpace& x,
                  const FiniteMetricSpace& y);

/// Exact GH distance by branch and bound over map pairs (f: X->Y, g: Y->X);
/// every correspondence contains one of this shape with no larger
/// distortion. Flags exact=false with the best incumbent when the node
/// budget runs out.
GHResult gh_exact(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                  std::uint64_t budget = 10'000'000);

/// Cheap lower bound: half the diameter gap, and half the largest gap
/// between the aligned sorted distance multisets (padded with zeros).
double gh_lower_bound(const FiniteMetricSpace& x, const FiniteMetricSpace& y);

/// distortion(tau) / 2 — any correspondence witnesses an upper bound.
double gh_upper_from(const Correspondence& tau, const FiniteMetricSpace& x,
                     const FiniteMetricSpace& y);

/// Identity correspondence between two spaces on the same point count.
Correspondence identity_correspondence(int n);

}  // namespace hcstab
