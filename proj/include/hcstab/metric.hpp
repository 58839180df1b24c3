#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hcstab/error.hpp"

namespace hcstab {

/// A partition of {0,...,n-1} in canonical form: every block sorted
/// ascending, blocks ordered by their smallest member.
struct Partition {
    std::vector<std::vector<int>> blocks;

    static Partition singletons(int n);
    /// block_ids[i] = arbitrary id of the block containing point i.
    static Partition from_block_ids(const std::vector<int>& block_ids);

    int point_count() const;
    int block_count() const { return static_cast<int>(blocks.size()); }
    /// Index of the block containing point i.
    int block_of(int i) const;
    /// True iff every block of *this is contained in a block of other.
    bool refines(const Partition& other) const;
    void canonicalize();

    bool operator==(const Partition&) const = default;
};

struct MetricOptions {
    /// Comparison slack for validation (triangle / symmetry checks).
    double tolerance = 0.0;
    /// Collapse zero-distance duplicates instead of rejecting them.
    bool allow_pseudometric = false;
};

/// Immutable labeled finite metric space with a validated distance matrix.
class FiniteMetricSpace {
public:
    FiniteMetricSpace() = default;

    /// Validates and constructs. Throws Error with codes AsymmetricMatrix,
    /// NonzeroDiagonal, NegativeDistance, TriangleViolation, DuplicatePoint.
    static FiniteMetricSpace create(std::vector<std::string> labels,
                                    std::vector<std::vector<double>> dist,
                                    const MetricOptions& options = {});

    int size() const { return static_cast<int>(labels_.size()); }
    double d(int i, int j) const { return dist_[i][j]; }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<std::vector<double>>& matrix() const { return dist_; }
    int index_of(const std::string& label) const;
    double diameter() const;

private:
    std::vector<std::string> labels_;
    std::vector<std::vector<double>> dist_;
};

/// Alias: an ultrametric is a FiniteMetricSpace satisfying the strong
/// triangle inequality; use is_ultrametric / as_ultrametric to check.
using Ultrametric = FiniteMetricSpace;

struct DistanceSet {
    std::vector<double> values;  // strictly increasing, starts at 0
};

FiniteMetricSpace build_metric(std::vector<std::string> labels,
                               std::vector<std::vector<double>> matrix,
                               const MetricOptions& options = {});

bool is_ultrametric(const FiniteMetricSpace& m, double tolerance = 0.0);

/// Throws Error("NotUltrametric") unless m passes is_ultrametric.
const Ultrametric& as_ultrametric(const FiniteMetricSpace& m);

DistanceSet distance_set(const FiniteMetricSpace& m);

/// Points p0..pn on a line with consecutive gaps a_1..a_n; I(R) for n=1.
FiniteMetricSpace interval_space(const std::vector<double>& gaps);

FiniteMetricSpace scale(const FiniteMetricSpace& m, double alpha);

/// Connected components of the graph with edges {i,j : d(i,j) <= t}.
Partition t_components(const FiniteMetricSpace& m, double t);

FiniteMetricSpace restrict_space(const FiniteMetricSpace& m,
                                 const std::vector<std::string>& subset);
FiniteMetricSpace restrict_space(const FiniteMetricSpace& m,
                                 const std::vector<int>& subset);

/// Smallest positive gap between consecutive values of distance_set(m).
double min_distance_gap(const FiniteMetricSpace& m);

}  // namespace hcstab
