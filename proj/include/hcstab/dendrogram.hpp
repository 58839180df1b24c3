#pragma once

#include <string>
#include <vector>

#include "hcstab/metric.hpp"

namespace hcstab {

/// Right-continuous step function from thresholds to nested partitions.
/// Canonical form: breakpoints are exactly the change points, the first is
/// 0 with all singletons, the last carries the one-block partition.
struct Dendrogram {
    std::vector<std::string> labels;
    std::vector<double> breakpoints;
    std::vector<Partition> partitions;

    bool operator==(const Dendrogram&) const = default;
};

/// Flattened merge event log; simultaneous multi-way merges appear as one
/// row per absorbed block, all at equal height.
struct MergeRow {
    std::vector<std::string> block_a;
    std::vector<std::string> block_b;
    double height = 0.0;
    int merged_size = 0;
};

struct MergeTable {
    std::vector<std::string> labels;
    std::vector<MergeRow> rows;
};

/// Validates the dendrogram axioms and returns the canonical form with
/// redundant (non-changing) breakpoints removed. Error codes:
/// NotSingletonsAtZero, NoTopMerge, NotNested, UnsortedBreakpoints.
Dendrogram validate_dendrogram(std::vector<std::string> labels,
                               std::vector<double> breakpoints,
                               std::vector<Partition> partitions);

/// u(x,x') = min breakpoint at which x and x' share a block.
Ultrametric eta(const Dendrogram& theta);

/// breakpoints = distance_set(u), partition at t = t_components(u, t).
Dendrogram eta_inverse(const Ultrametric& u);

/// Partition at the largest breakpoint <= t (right-continuity).
const Partition& partition_at(const Dendrogram& theta, double t);

MergeTable to_merge_table(const Dendrogram& theta);
Dendrogram from_merge_table(const MergeTable& table);

/// Newick string; child branch length = parent height - child height,
/// leaves at height 0; multi-way merges emit multifurcating nodes.
std::string to_newick(const Dendrogram& theta);

}  // namespace hcstab
