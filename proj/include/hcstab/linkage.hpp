#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hcstab/dendrogram.hpp"
#include "hcstab/metric.hpp"

namespace hcstab {

/// Block-pair dissimilarity. The axioms (representation independence,
/// monotonicity under cross-distance inflation) are enforced by the
/// randomized harness, not by construction.
struct LinkageSpec {
    std::string name;
    std::function<double(const std::vector<int>&, const std::vector<int>&,
                         const FiniteMetricSpace&)>
        evaluate;
};

struct RunRound {
    double level = 0.0;                             // R_i
    Partition partition;                            // Theta_{i+1}, after merging
    std::vector<std::pair<int, int>> merge_edges;   // edges of G_{R_i}, as block
                                                    // indices into the pre-merge partition
};

struct RunTrace {
    std::vector<RunRound> rounds;
};

struct ClusterResult {
    Dendrogram dendrogram;
    RunTrace trace;
};

double linkage_sl(const std::vector<int>& a, const std::vector<int>& b,
                  const FiniteMetricSpace& m);
double linkage_cl(const std::vector<int>& a, const std::vector<int>& b,
                  const FiniteMetricSpace& m);
double linkage_al(const std::vector<int>& a, const std::vector<int>& b,
                  const FiniteMetricSpace& m);
/// SL linkage divided by the total number of points in both blocks; the
/// standard example of a non-increasing linkage function.
double exotic_linkage(const std::vector<int>& a, const std::vector<int>& b,
                      const FiniteMetricSpace& m);

LinkageSpec make_sl();
LinkageSpec make_cl();
LinkageSpec make_al();
LinkageSpec make_exotic();
/// Lookup by CLI name: "sl", "cl", "al", "exotic".
LinkageSpec linkage_by_name(const std::string& name);

/// The standard linkage-based recursion: R_i = min pairwise linkage, merge
/// the connected components of the graph {l(B,B') <= R_i}.
ClusterResult run_standard(const FiniteMetricSpace& m, const LinkageSpec& linkage);

/// theta(r) = partition after the last recorded round with level <= r;
/// handles non-increasing level sequences (exotic linkage).
Dendrogram dendrogram_from_trace(const FiniteMetricSpace& m, const RunTrace& trace);

/// True iff the R_i sequence of the trace is strictly increasing.
bool check_increasing(const RunTrace& trace);

struct HarnessReport {
    int trials = 0;
    bool representation_independent = true;
    bool monotonic = true;
    bool scale_preserving = true;
    std::string counterexample;  // empty when all checks pass

    bool all_passed() const {
        return representation_independent && monotonic && scale_preserving;
    }
};

/// Randomized check of the linkage axioms plus scale preservation.
HarnessReport axiom_harness(const LinkageSpec& linkage, int trials, std::uint64_t seed);

}  // namespace hcstab
