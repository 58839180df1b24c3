#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hcstab/gromov_hausdorff.hpp"
#include "hcstab/linkage.hpp"
#include "hcstab/metric.hpp"
#include "hcstab/unchaining.hpp"

namespace hcstab {

/// A clustering method as a black box, for the stability experiments.
struct MethodSpec {
    std::string name;
    std::function<ClusterResult(const FiniteMetricSpace&)> run;
};

MethodSpec method_standard(const LinkageSpec& linkage);
MethodSpec method_almost_standard(const LinkageSpec& linkage, const UnchainingSpec& condition);
MethodSpec method_sl_alpha(double alpha);

enum class PathKind { gamma, bridge_single, bridge_double };

/// A one-parameter family of spaces interpolating the base toward a small
/// interval space. For gamma the cross linkage is frozen at R; for the
/// bridge kinds the bridge pair stays pinned at R while everything else
/// drifts, and delta is the minimal gap of the base's distance set.
struct PathSpec {
    PathKind kind = PathKind::gamma;
    FiniteMetricSpace base;
    std::vector<int> block1, block2;
    int bridge1 = -1, bridge2 = -1;  // bridge kinds only
    double r = 0.0;
    double delta = 0.0;  // bridge kinds only
};

PathSpec make_gamma_spec(FiniteMetricSpace base, std::vector<int> block1,
                         std::vector<int> block2, double r);

/// Locates the unique minimal cross edge, picks the single/double variant
/// from the block sizes, and sets delta to the base's minimal distance gap.
/// Throws BridgeNotUnique when the minimal cross edge is tied.
PathSpec make_bridge_spec(FiniteMetricSpace base, std::vector<int> block1,
                          std::vector<int> block2);

/// Gamma(t): within-block distances scaled by (1-t), cross distances
/// (1-t)d + tR; Gamma(1) = I(R).
FiniteMetricSpace gamma_path(const PathSpec& spec, double t);

/// Bridge variants; endpoints I(delta,R) / I(delta,R,delta), bridge pair at
/// exactly R for every t. No cross distance ever falls in (R, R+delta).
FiniteMetricSpace bridge_path(const PathSpec& spec, double t);

/// Dispatch on spec.kind.
FiniteMetricSpace path_point(const PathSpec& spec, double t);

struct BridgeSpace {
    FiniteMetricSpace space;
    std::vector<int> block1, block2;
};

/// Two blocks of alpha+2 points each, all within-block distances 1, one
/// cross pair at 2, remaining cross distances 2+gap. The blocks are
/// (1,2)-bridged by a single edge and fail the SL(alpha) condition at 2.
BridgeSpace prop_bridge_space(int alpha, double gap = 0.5);

struct CLFamily {
    FiniteMetricSpace x;  // chain space X_k
    Ultrametric u;        // limit ultrametric U_k
    Correspondence tau;   // canonical matching a_i ~ a~_i, b_j ~ b~_j
    double delta = 0.0;   // 1/(k+1)
    double epsilon = 0.0; // delta/2
};

/// The family showing complete linkage is not semi-stable along arbitrary
/// approximating sequences: GH(X_k, U_k) <= 1/(k+1) while the CL output
/// keeps a_{-2}, b_{-2} apart until height 1 + k*eps + delta.
CLFamily cl_counterexample(int k);

struct RegularityReport {
    double r = 0.0;
    int samples = 0;
    bool constant = true;   // linkage value constant along the path
    bool equals_r = true;   // ... and equal to R at every sample
    double min_value = 0.0;
    double max_value = 0.0;
};

/// Evaluates linkage(B1,B2) on Gamma(t) at samples t in [0,1).
RegularityReport gamma_regularity_check(const LinkageSpec& linkage, const PathSpec& spec,
                                        int samples);

struct ContinuityReport {
    int grid = 0;
    bool passed = true;
    double max_step_gap = 0.0;    // largest per-step GH upper bound
    double max_ratio = 0.0;       // gap / bound, worst step
};

/// Checks GH(Gamma(s1), Gamma(s2)) <= (s2-s1)(diam + R + 2 delta)/2 for
/// consecutive grid points, via the identity correspondence (both < 1) or
/// the block-collapse correspondence (s2 = 1).
ContinuityReport path_continuity_check(const PathSpec& spec, int grid);

struct WitnessPair {
    double s1 = 0.0, s2 = 0.0;   // s1 < s2, s2 - s1 <= tol
    double input_gap = 0.0;      // GH upper bound between the two inputs
    double output_gap = 0.0;     // certified GH lower bound between outputs
    bool merged_at_r_s1 = false;
    bool merged_at_r_s2 = true;
    bool output_gap_exact = false;
};

/// Bisects the path parameter for the merge-behavior flip at level R and
/// certifies a large output gap against a vanishing input gap. Throws
/// NoBehaviorFlip when both endpoints behave alike.
WitnessPair instability_scan(const MethodSpec& method, const PathSpec& path, double tol);

struct LevelStats {
    double level = 0.0;
    double max_gh = 0.0;
    double mean_gh = 0.0;
    bool exact = true;  // every trial's GH value certified exact
};

struct PerturbationReport {
    int trials = 0;
    std::vector<LevelStats> per_level;
};

/// For each noise level eta, perturbs every distance of U by at most eta/2
/// (rejection-sampled to stay a metric), runs the method, and records the
/// GH distance from the output back to U. Trials run concurrently; each
/// derives its randomness from (seed, level, trial).
PerturbationReport semistability_probe(const Ultrametric& u, const MethodSpec& method,
                                       const std::vector<double>& levels, int trials,
                                       std::uint64_t seed);

struct BridgeEdge {
    int b1 = -1, b2 = -1;
    double r = 0.0;
};

/// The unique minimal cross pair between two t-components, when all other
/// cross distances strictly exceed it; nullopt when tied. Throws
/// NotTComponents when the blocks are not t-components of m.
std::optional<BridgeEdge> bridged_by_single_edge(const FiniteMetricSpace& m, double t,
                                                 const std::vector<int>& block1,
                                                 const std::vector<int>& block2);

}  // namespace hcstab
