#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hcstab/linkage.hpp"
#include "hcstab/metric.hpp"

namespace hcstab {

/// Unchaining predicate P(B,B',R) with the finite set of R values at which
/// it can change. The threshold property (eventually true for large R) is
/// assumed, and violations surface as NoProgress / NoThresholdFound.
struct UnchainingSpec {
    std::string name;
    std::function<bool(const std::vector<int>&, const std::vector<int>&, double,
                       const FiniteMetricSpace&)>
        satisfied;
    std::function<std::vector<double>(const std::vector<int>&, const std::vector<int>&,
                                      const FiniteMetricSpace&)>
        candidate_thresholds;
};

struct RipsSummary {
    std::vector<int> block;
    double scale = 0.0;
    int dimension = 0;
};

/// Size of the largest clique of the threshold graph on B at scale t,
/// minus one. `node_budget` bounds the clique search; exceeding it throws
/// Error("CliqueBudgetExceeded").
int rips_block_dim(const std::vector<int>& block, double t, const FiniteMetricSpace& m,
                   std::uint64_t node_budget = 1'000'000);

/// Max dimension over cliques at scale t meeting both blocks, or nullopt
/// when no cross edge <= t exists.
std::optional<int> cross_simplex_max_dim(const std::vector<int>& b1,
                                         const std::vector<int>& b2, double t,
                                         const FiniteMetricSpace& m,
                                         std::uint64_t node_budget = 1'000'000);

/// The SL(alpha) unchaining condition: satisfied at (B1,B2,R) iff a cross
/// simplex exists at scale R and alpha * dim >= min of the block complex
/// dimensions. Candidate thresholds are the distance set of the space.
UnchainingSpec p_alpha(double alpha);

/// P = always true; reduces the almost-standard recursion to the standard one.
UnchainingSpec always_satisfied();

/// Parse "p-alpha:<a>" or "always".
UnchainingSpec condition_by_name(const std::string& spec);

/// The almost-standard recursion with the three-case R_i selection; edges
/// require both l(B,B') <= R_i and P at R_i.
ClusterResult run_almost_standard(const FiniteMetricSpace& m, const LinkageSpec& linkage,
                                  const UnchainingSpec& condition);

/// SL(alpha) computed by iterating R over the distance set directly.
ClusterResult sl_alpha(const FiniteMetricSpace& m, double alpha);

/// Minimal candidate threshold at which the predicate holds for the pair.
double unchaining_threshold(const UnchainingSpec& condition, const std::vector<int>& b1,
                            const std::vector<int>& b2, const FiniteMetricSpace& m);

}  // namespace hcstab
