#include "hcstab/unchaining.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <set>

namespace hcstab {

namespace {

/// Max-clique search over adjacency bitmasks (Tomita-style pivoting).
class CliqueSearch {
public:
    CliqueSearch(std::vector<std::uint64_t> adj, std::uint64_t budget)
        : adj_(std::move(adj)), budget_(budget) {}

    int max_clique(std::uint64_t candidates) {
        best_ = 0;
        expand(0, candidates);
        return best_;
    }

private:
    void expand(int size, std::uint64_t cand) {
        if (++nodes_ > budget_)
            throw Error("CliqueBudgetExceeded", "clique search node budget exhausted");
        if (cand == 0) {
            best_ = std::max(best_, size);
            return;
        }
        if (size + std::popcount(cand) <= best_) return;
        // pivot on the candidate with the most candidate neighbors
        int pivot = -1, pivot_deg = -1;
        for (std::uint64_t rest = cand; rest;) {
            int v = std::countr_zero(rest);
            rest &= rest - 1;
            int deg = std::popcount(cand & adj_[v]);
            if (deg > pivot_deg) { pivot_deg = deg; pivot = v; }
        }
        std::uint64_t ext = cand & ~adj_[pivot];
        while (ext) {
            int v = std::countr_zero(ext);
            std::uint64_t bit = std::uint64_t{1} << v;
            ext &= ~bit;
            expand(size + 1, cand & adj_[v]);
            cand &= ~bit;
        }
    }

    std::vector<std::uint64_t> adj_;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    int best_ = 0;
};

/// Threshold-graph adjacency masks over the points listed in `vertices`.
std::vector<std::uint64_t> threshold_adjacency(const std::vector<int>& vertices, double t,
                                               const FiniteMetricSpace& m) {
    const int k = static_cast<int>(vertices.size());
    if (k > 64) throw Error("BlockTooLarge", "clique search supports at most 64 points");
    std::vector<std::uint64_t> adj(k, 0);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            if (a != b && m.d(vertices[a], vertices[b]) <= t)
                adj[a] |= std::uint64_t{1} << b;
    return adj;
}

std::uint64_t full_mask(int k) {
    return k == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1;
}

}  // namespace

int rips_block_dim(const std::vector<int>& block, double t, const FiniteMetricSpace& m,
                   std::uint64_t node_budget) {
    if (block.empty()) throw Error("EmptyBlock", "rips_block_dim of empty block");
    CliqueSearch search(threshold_adjacency(block, t, m), node_budget);
    return search.max_clique(full_mask(static_cast<int>(block.size()))) - 1;
}

std::optional<int> cross_simplex_max_dim(const std::vector<int>& b1,
                                         const std::vector<int>& b2, double t,
                                         const FiniteMetricSpace& m,
                                         std::uint64_t node_budget) {
    if (b1.empty() || b2.empty()) throw Error("EmptyBlock", "cross simplex of empty block");
    for (int x : b1)
        for (int y : b2)
            if (x == y) throw Error("OverlappingBlocks", "blocks intersect");

    std::vector<int> vertices = b1;
    vertices.insert(vertices.end(), b2.begin(), b2.end());
    auto adj = threshold_adjacency(vertices, t, m);
    const int k1 = static_cast<int>(b1.size());
    const int k = static_cast<int>(vertices.size());

    // any cross clique contains a cross edge; root the search at each one
    int best = 0;
    bool found = false;
    CliqueSearch search(adj, node_budget);
    for (int a = 0; a < k1; ++a)
        for (int b = k1; b < k; ++b)
            if (adj[a] & (std::uint64_t{1} << b)) {
                found = true;
                int extension = search.max_clique(adj[a] & adj[b] & full_mask(k));
                best = std::max(best, 2 + extension);
            }
    if (!found) return std::nullopt;
    return best - 1;
}

UnchainingSpec p_alpha(double alpha) {
    if (!(alpha >= 1.0)) throw Error("AlphaTooSmall", "p_alpha requires alpha >= 1");
    UnchainingSpec spec;
    spec.name = "p-alpha:" + std::to_string(alpha);
    spec.satisfied = [alpha](const std::vector<int>& b1, const std::vector<int>& b2,
                             double r, const FiniteMetricSpace& m) {
        auto cross = cross_simplex_max_dim(b1, b2, r, m);
        if (!cross) return false;
        int min_dim = std::min(rips_block_dim(b1, r, m), rips_block_dim(b2, r, m));
        return alpha * static_cast<double>(*cross) >= static_cast<double>(min_dim);
    };
    spec.candidate_thresholds = [](const std::vector<int>&, const std::vector<int>&,
                                   const FiniteMetricSpace& m) {
        return distance_set(m).values;
    };
    return spec;
}

UnchainingSpec always_satisfied() {
    UnchainingSpec spec;
    spec.name = "always";
    spec.satisfied = [](const std::vector<int>&, const std::vector<int>&, double,
                        const FiniteMetricSpace&) { return true; };
    spec.candidate_thresholds = [](const std::vector<int>&, const std::vector<int>&,
                                   const FiniteMetricSpace& m) {
        return distance_set(m).values;
    };
    return spec;
}

UnchainingSpec condition_by_name(const std::string& spec) {
    if (spec == "always") return always_satisfied();
    const std::string prefix = "p-alpha:";
    if (spec.rfind(prefix, 0) == 0) {
        double alpha = std::stod(spec.substr(prefix.size()));
        return p_alpha(alpha);
    }
    throw Error("UnknownCondition", spec);
}

namespace {

void merge_components(std::vector<std::vector<int>>& blocks,
                      const std::vector<std::pair<int, int>>& edges) {
    const int k = static_cast<int>(blocks.size());
    std::vector<int> comp(k);
    for (int i = 0; i < k; ++i) comp[i] = i;
    std::function<int(int)> find = [&](int x) {
        while (comp[x] != x) x = comp[x] = comp[comp[x]];
        return x;
    };
    for (auto [i, j] : edges) comp[find(i)] = find(j);
    std::vector<std::vector<int>> merged(k);
    for (int i = 0; i < k; ++i) {
        auto& dst = merged[find(i)];
        dst.insert(dst.end(), blocks[i].begin(), blocks[i].end());
    }
    blocks.clear();
    for (auto& b : merged)
        if (!b.empty()) {
            std::sort(b.begin(), b.end());
            blocks.push_back(std::move(b));
        }
    // keep the canonical order so trace edge indices match the partitions
    std::sort(blocks.begin(), blocks.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

}  // namespace

ClusterResult run_almost_standard(const FiniteMetricSpace& m, const LinkageSpec& linkage,
                                  const UnchainingSpec& condition) {
    const int n = m.size();
    std::vector<std::vector<int>> blocks;
    for (int i = 0; i < n; ++i) blocks.push_back({i});

    RunTrace trace;
    bool progressed = true;  // Theta_1 != Theta_0 = empty set
    double level_prev = 0.0;
    while (blocks.size() > 1) {
        const int k = static_cast<int>(blocks.size());
        std::vector<std::vector<double>> link(k, std::vector<double>(k, 0.0));
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                link[i][j] = linkage.evaluate(blocks[i], blocks[j], m);

        double level = std::numeric_limits<double>::infinity();
        if (progressed) {
            // case a: fresh minimum after a merge
            for (int i = 0; i < k; ++i)
                for (int j = i + 1; j < k; ++j) level = std::min(level, link[i][j]);
        } else {
            // case b: next strictly larger linkage value
            for (int i = 0; i < k; ++i)
                for (int j = i + 1; j < k; ++j)
                    if (link[i][j] > level_prev) level = std::min(level, link[i][j]);
            if (!std::isfinite(level)) {
                // case c: minimal candidate threshold at which some pair both
                // satisfies P and has linkage <= R (so the round makes progress)
                std::set<double> candidates;
                for (int i = 0; i < k; ++i)
                    for (int j = i + 1; j < k; ++j) {
                        auto c = condition.candidate_thresholds(blocks[i], blocks[j], m);
                        candidates.insert(c.begin(), c.end());
                    }
                for (double r : candidates) {
                    bool usable = false;
                    for (int i = 0; i < k && !usable; ++i)
                        for (int j = i + 1; j < k && !usable; ++j)
                            if (link[i][j] <= r &&
                                condition.satisfied(blocks[i], blocks[j], r, m))
                                usable = true;
                    if (usable) { level = r; break; }
                }
                if (!std::isfinite(level))
                    throw Error("NoProgress",
                                "unchaining condition never satisfied on its candidate set");
            }
        }

        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                if (link[i][j] <= level && condition.satisfied(blocks[i], blocks[j], level, m))
                    edges.emplace_back(i, j);

        if (edges.empty()) {
            progressed = false;
            level_prev = level;
            continue;
        }
        merge_components(blocks, edges);
        progressed = true;
        level_prev = level;

        RunRound round;
        round.level = level;
        round.merge_edges = std::move(edges);
        round.partition.blocks = blocks;
        round.partition.canonicalize();
        trace.rounds.push_back(std::move(round));
    }

    ClusterResult result;
    result.dendrogram = dendrogram_from_trace(m, trace);
    result.trace = std::move(trace);
    return result;
}

ClusterResult sl_alpha(const FiniteMetricSpace& m, double alpha) {
    if (!(alpha >= 1.0)) throw Error("AlphaTooSmall", "sl_alpha requires alpha >= 1");
    UnchainingSpec condition = p_alpha(alpha);

    const int n = m.size();
    std::vector<std::vector<int>> blocks;
    for (int i = 0; i < n; ++i) blocks.push_back({i});

    RunTrace trace;
    for (double r : distance_set(m).values) {
        if (blocks.size() == 1) break;
        const int k = static_cast<int>(blocks.size());
        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                if (linkage_sl(blocks[i], blocks[j], m) <= r &&
                    condition.satisfied(blocks[i], blocks[j], r, m))
                    edges.emplace_back(i, j);
        if (edges.empty()) continue;
        merge_components(blocks, edges);

        RunRound round;
        round.level = r;
        round.merge_edges = std::move(edges);
        round.partition.blocks = blocks;
        round.partition.canonicalize();
        trace.rounds.push_back(std::move(round));
    }
    if (blocks.size() != 1)
        throw Error("NoProgress", "distance set exhausted before reaching one block");

    ClusterResult result;
    result.dendrogram = dendrogram_from_trace(m, trace);
    result.trace = std::move(trace);
    return result;
}

double unchaining_threshold(const UnchainingSpec& condition, const std::vector<int>& b1,
                            const std::vector<int>& b2, const FiniteMetricSpace& m) {
    if (b1.empty() || b2.empty()) throw Error("EmptyBlock", "threshold of empty block");
    for (double r : condition.candidate_thresholds(b1, b2, m))
        if (condition.satisfied(b1, b2, r, m)) return r;
    throw Error("NoThresholdFound", "predicate never satisfied on its candidate set");
}

}  // namespace hcstab
