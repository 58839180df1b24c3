#include "hcstab/metric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace hcstab {

Partition Partition::singletons(int n) {
    Partition p;
    p.blocks.reserve(n);
    for (int i = 0; i < n; ++i) p.blocks.push_back({i});
    return p;
}

Partition Partition::from_block_ids(const std::vector<int>& block_ids) {
    Partition p;
    std::vector<int> seen_ids;
    std::vector<int> slot(block_ids.size(), -1);
    for (int i = 0; i < static_cast<int>(block_ids.size()); ++i) {
        int id = block_ids[i];
        int s = -1;
        for (int k = 0; k < static_cast<int>(seen_ids.size()); ++k)
            if (seen_ids[k] == id) { s = k; break; }
        if (s < 0) {
            s = static_cast<int>(seen_ids.size());
            seen_ids.push_back(id);
            p.blocks.emplace_back();
        }
        p.blocks[s].push_back(i);
    }
    p.canonicalize();
    return p;
}

int Partition::point_count() const {
    int n = 0;
    for (const auto& b : blocks) n += static_cast<int>(b.size());
    return n;
}

int Partition::block_of(int i) const {
    for (int k = 0; k < static_cast<int>(blocks.size()); ++k)
        if (std::binary_search(blocks[k].begin(), blocks[k].end(), i)) return k;
    throw Error("UnknownPoint", "point " + std::to_string(i) + " not in partition");
}

bool Partition::refines(const Partition& other) const {
    for (const auto& b : blocks) {
        if (b.empty()) return false;
        int target = other.block_of(b.front());
        for (int x : b)
            if (other.block_of(x) != target) return false;
    }
    return true;
}

void Partition::canonicalize() {
    for (auto& b : blocks) std::sort(b.begin(), b.end());
    std::sort(blocks.begin(), blocks.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

FiniteMetricSpace FiniteMetricSpace::create(std::vector<std::string> labels,
                                            std::vector<std::vector<double>> dist,
                                            const MetricOptions& options) {
    const int n = static_cast<int>(labels.size());
    if (static_cast<int>(dist.size()) != n)
        throw Error("ShapeMismatch", "matrix row count != label count");
    for (const auto& row : dist)
        if (static_cast<int>(row.size()) != n)
            throw Error("ShapeMismatch", "matrix is not square");

    const double tol = options.tolerance;
    for (int i = 0; i < n; ++i) {
        if (dist[i][i] != 0.0)
            throw Error("NonzeroDiagonal", "dist[" + std::to_string(i) + "][" +
                                               std::to_string(i) + "] != 0");
        for (int j = 0; j < n; ++j) {
            if (std::isnan(dist[i][j]) || dist[i][j] < 0.0)
                throw Error("NegativeDistance",
                            "dist[" + std::to_string(i) + "][" + std::to_string(j) + "]");
            if (std::abs(dist[i][j] - dist[j][i]) > tol)
                throw Error("AsymmetricMatrix",
                            "dist[" + std::to_string(i) + "][" + std::to_string(j) + "]");
        }
    }

    // Zero off-diagonal entries: duplicates.
    std::vector<int> representative(n);
    std::iota(representative.begin(), representative.end(), 0);
    bool has_duplicates = false;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (dist[i][j] == 0.0) {
                if (!options.allow_pseudometric)
                    throw Error("DuplicatePoint", labels[i] + " and " + labels[j] +
                                                      " are at distance 0");
                has_duplicates = true;
                representative[j] = std::min(representative[j], representative[i]);
            }
    if (has_duplicates) {
        std::vector<int> keep;
        for (int i = 0; i < n; ++i)
            if (representative[i] == i) keep.push_back(i);
        std::vector<std::string> new_labels;
        std::vector<std::vector<double>> new_dist(keep.size(),
                                                  std::vector<double>(keep.size()));
        for (std::size_t a = 0; a < keep.size(); ++a) {
            new_labels.push_back(labels[keep[a]]);
            for (std::size_t b = 0; b < keep.size(); ++b)
                new_dist[a][b] = dist[keep[a]][keep[b]];
        }
        MetricOptions strict = options;
        strict.allow_pseudometric = false;
        return create(std::move(new_labels), std::move(new_dist), strict);
    }

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (dist[i][k] > dist[i][j] + dist[j][k] + tol)
                    throw Error("TriangleViolation",
                                "(" + std::to_string(i) + "," + std::to_string(j) +
                                    "," + std::to_string(k) + ")");

    FiniteMetricSpace m;
    m.labels_ = std::move(labels);
    m.dist_ = std::move(dist);
    return m;
}

int FiniteMetricSpace::index_of(const std::string& label) const {
    for (int i = 0; i < size(); ++i)
        if (labels_[i] == label) return i;
    throw Error("UnknownLabel", label);
}

double FiniteMetricSpace::diameter() const {
    double best = 0.0;
    for (int i = 0; i < size(); ++i)
        for (int j = i + 1; j < size(); ++j) best = std::max(best, dist_[i][j]);
    return best;
}

FiniteMetricSpace build_metric(std::vector<std::string> labels,
                               std::vector<std::vector<double>> matrix,
                               const MetricOptions& options) {
    return FiniteMetricSpace::create(std::move(labels), std::move(matrix), options);
}

bool is_ultrametric(const FiniteMetricSpace& m, double tolerance) {
    const int n = m.size();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (m.d(i, k) > std::max(m.d(i, j), m.d(j, k)) + tolerance) return false;
    return true;
}

const Ultrametric& as_ultrametric(const FiniteMetricSpace& m) {
    if (!is_ultrametric(m)) throw Error("NotUltrametric", "strong triangle inequality fails");
    return m;
}

DistanceSet distance_set(const FiniteMetricSpace& m) {
    std::set<double> values;
    values.insert(0.0);
    for (int i = 0; i < m.size(); ++i)
        for (int j = i + 1; j < m.size(); ++j) values.insert(m.d(i, j));
    DistanceSet ds;
    ds.values.assign(values.begin(), values.end());
    return ds;
}

FiniteMetricSpace interval_space(const std::vector<double>& gaps) {
    if (gaps.empty()) throw Error("EmptyInput", "interval_space needs at least one gap");
    for (double g : gaps)
        if (!(g > 0.0)) throw Error("NonpositiveGap", "all gaps must be positive");
    const int n = static_cast<int>(gaps.size()) + 1;
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
    std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (int k = i; k < j; ++k) s += gaps[k];
            dist[i][j] = dist[j][i] = s;
        }
    return FiniteMetricSpace::create(std::move(labels), std::move(dist));
}

FiniteMetricSpace scale(const FiniteMetricSpace& m, double alpha) {
    if (!(alpha > 0.0)) throw Error("NonpositiveScale", "scale factor must be positive");
    auto dist = m.matrix();
    for (auto& row : dist)
        for (double& v : row) v *= alpha;
    return FiniteMetricSpace::create(m.labels(), std::move(dist));
}

Partition t_components(const FiniteMetricSpace& m, double t) {
    const int n = m.size();
    std::vector<int> comp(n, -1);
    int next = 0;
    for (int s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        // BFS over edges d <= t
        std::vector<int> stack{s};
        comp[s] = next;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w = 0; w < n; ++w)
                if (comp[w] < 0 && m.d(v, w) <= t) {
                    comp[w] = next;
                    stack.push_back(w);
                }
        }
        ++next;
    }
    return Partition::from_block_ids(comp);
}

FiniteMetricSpace restrict_space(const FiniteMetricSpace& m,
                                 const std::vector<int>& subset) {
    if (subset.empty()) throw Error("EmptySubset", "restriction to empty set");
    std::vector<std::string> labels;
    std::vector<std::vector<double>> dist(subset.size(),
                                          std::vector<double>(subset.size()));
    for (std::size_t a = 0; a < subset.size(); ++a) {
        if (subset[a] < 0 || subset[a] >= m.size())
            throw Error("UnknownLabel", "index " + std::to_string(subset[a]));
        labels.push_back(m.labels()[subset[a]]);
        for (std::size_t b = 0; b < subset.size(); ++b)
            dist[a][b] = m.d(subset[a], subset[b]);
    }
    return FiniteMetricSpace::create(std::move(labels), std::move(dist));
}

FiniteMetricSpace restrict_space(const FiniteMetricSpace& m,
                                 const std::vector<std::string>& subset) {
    std::vector<int> idx;
    idx.reserve(subset.size());
    for (const auto& s : subset) idx.push_back(m.index_of(s));
    return restrict_space(m, idx);
}

double min_distance_gap(const FiniteMetricSpace& m) {
    auto ds = distance_set(m);
    if (ds.values.size() < 2) throw Error("NoPositiveDistance", "space has one point");
    double best = ds.values[1] - ds.values[0];
    for (std::size_t i = 2; i < ds.values.size(); ++i)
        best = std::min(best, ds.values[i] - ds.values[i - 1]);
    return best;
}

}  // namespace hcstab
