#include "hcstab/dendrogram.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace hcstab {

Dendrogram validate_dendrogram(std::vector<std::string> labels,
                               std::vector<double> breakpoints,
                               std::vector<Partition> partitions) {
    const int n = static_cast<int>(labels.size());
    if (breakpoints.size() != partitions.size() || breakpoints.empty())
        throw Error("ShapeMismatch", "breakpoints and partitions must align");
    for (std::size_t i = 1; i < breakpoints.size(); ++i)
        if (!(breakpoints[i] > breakpoints[i - 1]))
            throw Error("UnsortedBreakpoints", "breakpoints must strictly increase");
    if (breakpoints.front() != 0.0)
        throw Error("NotSingletonsAtZero", "first breakpoint must be 0");

    for (auto& p : partitions) {
        p.canonicalize();
        if (p.point_count() != n)
            throw Error("ShapeMismatch", "partition does not cover all points");
    }
    if (partitions.front() != Partition::singletons(n))
        throw Error("NotSingletonsAtZero", "partition at 0 must be all singletons");
    if (partitions.back().block_count() != 1)
        throw Error("NoTopMerge", "last partition must be the single block");
    for (std::size_t i = 1; i < partitions.size(); ++i)
        if (!partitions[i - 1].refines(partitions[i]))
            throw Error("NotNested", "partition at breakpoint " + std::to_string(i) +
                                          " does not coarsen its predecessor");

    Dendrogram out;
    out.labels = std::move(labels);
    for (std::size_t i = 0; i < partitions.size(); ++i) {
        if (i > 0 && partitions[i] == out.partitions.back()) continue;
        out.breakpoints.push_back(breakpoints[i]);
        out.partitions.push_back(std::move(partitions[i]));
    }
    return out;
}

Ultrametric eta(const Dendrogram& theta) {
    const int n = static_cast<int>(theta.labels.size());
    std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
    for (std::size_t level = 0; level < theta.partitions.size(); ++level) {
        const Partition& p = theta.partitions[level];
        for (const auto& block : p.blocks)
            for (std::size_t a = 0; a < block.size(); ++a)
                for (std::size_t b = a + 1; b < block.size(); ++b) {
                    int i = block[a], j = block[b];
                    if (i != j && dist[i][j] == 0.0)
                        dist[i][j] = dist[j][i] = theta.breakpoints[level];
                }
    }
    return FiniteMetricSpace::create(theta.labels, std::move(dist));
}

Dendrogram eta_inverse(const Ultrametric& u) {
    if (!is_ultrametric(u)) throw Error("NotUltrametric", "input is not ultrametric");
    auto ds = distance_set(u);
    std::vector<Partition> parts;
    parts.reserve(ds.values.size());
    for (double t : ds.values) parts.push_back(t_components(u, t));
    return validate_dendrogram(u.labels(), ds.values, std::move(parts));
}

const Partition& partition_at(const Dendrogram& theta, double t) {
    std::size_t k = 0;
    for (std::size_t i = 0; i < theta.breakpoints.size(); ++i)
        if (theta.breakpoints[i] <= t) k = i;
    return theta.partitions[k];
}

namespace {

std::vector<std::string> block_labels(const Dendrogram& theta,
                                      const std::vector<int>& block) {
    std::vector<std::string> out;
    out.reserve(block.size());
    for (int i : block) out.push_back(theta.labels[i]);
    return out;
}

}  // namespace

MergeTable to_merge_table(const Dendrogram& theta) {
    MergeTable table;
    table.labels = theta.labels;
    for (std::size_t level = 1; level < theta.partitions.size(); ++level) {
        const Partition& prev = theta.partitions[level - 1];
        const Partition& cur = theta.partitions[level];
        for (const auto& block : cur.blocks) {
            std::vector<std::vector<int>> children;
            for (const auto& child : prev.blocks)
                if (cur.blocks[cur.block_of(child.front())] == block)
                    children.push_back(child);
            if (children.size() < 2) continue;
            std::vector<int> acc = children[0];
            for (std::size_t c = 1; c < children.size(); ++c) {
                MergeRow row;
                row.block_a = block_labels(theta, acc);
                row.block_b = block_labels(theta, children[c]);
                row.height = theta.breakpoints[level];
                acc.insert(acc.end(), children[c].begin(), children[c].end());
                std::sort(acc.begin(), acc.end());
                row.merged_size = static_cast<int>(acc.size());
                table.rows.push_back(std::move(row));
            }
        }
    }
    return table;
}

Dendrogram from_merge_table(const MergeTable& table) {
    const int n = static_cast<int>(table.labels.size());
    std::map<std::string, int> index;
    for (int i = 0; i < n; ++i) index[table.labels[i]] = i;
    auto to_indices = [&](const std::vector<std::string>& ls) {
        std::vector<int> out;
        for (const auto& l : ls) {
            auto it = index.find(l);
            if (it == index.end()) throw Error("InconsistentReplay", "unknown label " + l);
            out.push_back(it->second);
        }
        std::sort(out.begin(), out.end());
        return out;
    };

    std::vector<std::vector<int>> blocks;
    for (int i = 0; i < n; ++i) blocks.push_back({i});

    std::vector<double> breakpoints{0.0};
    std::vector<Partition> partitions{Partition::singletons(n)};
    auto record = [&](double h) {
        Partition p;
        p.blocks = blocks;
        p.canonicalize();
        breakpoints.push_back(h);
        partitions.push_back(std::move(p));
    };

    double prev_height = 0.0;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const MergeRow& row = table.rows[r];
        if (r > 0 && row.height < prev_height)
            throw Error("InconsistentReplay", "heights must be nondecreasing");
        auto a = to_indices(row.block_a);
        auto b = to_indices(row.block_b);
        auto find = [&](const std::vector<int>& target) {
            for (std::size_t k = 0; k < blocks.size(); ++k)
                if (blocks[k] == target) return k;
            throw Error("InconsistentReplay", "merge row references a non-current block");
        };
        std::size_t ia = find(a), ib = find(b);
        if (ia == ib) throw Error("InconsistentReplay", "row merges a block with itself");
        std::vector<int> merged = blocks[ia];
        merged.insert(merged.end(), blocks[ib].begin(), blocks[ib].end());
        std::sort(merged.begin(), merged.end());
        if (static_cast<int>(merged.size()) != row.merged_size)
            throw Error("InconsistentReplay", "merged-size mismatch");
        blocks.erase(blocks.begin() + std::max(ia, ib));
        blocks.erase(blocks.begin() + std::min(ia, ib));
        blocks.push_back(std::move(merged));
        prev_height = row.height;
        bool last_at_height = r + 1 == table.rows.size() ||
                              table.rows[r + 1].height != row.height;
        if (last_at_height) record(row.height);
    }
    if (blocks.size() != 1 && n > 1)
        throw Error("InconsistentReplay", "replay did not end with a single block");
    return validate_dendrogram(table.labels, std::move(breakpoints), std::move(partitions));
}

namespace {

struct NewickNode {
    int leaf = -1;  // label index, or -1 for internal
    double height = 0.0;
    std::vector<int> children;
};

void emit_newick(const Dendrogram& theta, const std::vector<NewickNode>& nodes,
                 int id, double parent_height, bool root, std::ostringstream& os) {
    const NewickNode& node = nodes[id];
    if (node.leaf >= 0) {
        os << theta.labels[node.leaf];
    } else {
        os << '(';
        for (std::size_t c = 0; c < node.children.size(); ++c) {
            if (c > 0) os << ',';
            emit_newick(theta, nodes, node.children[c], node.height, false, os);
        }
        os << ')';
    }
    if (!root) os << ':' << parent_height - node.height;
}

}  // namespace

std::string to_newick(const Dendrogram& theta) {
    const int n = static_cast<int>(theta.labels.size());
    std::vector<NewickNode> nodes;
    // node id per current block, aligned with the canonical block order
    std::vector<int> block_node;
    for (const auto& b : theta.partitions.front().blocks) {
        NewickNode leaf;
        leaf.leaf = b.front();
        nodes.push_back(leaf);
        block_node.push_back(static_cast<int>(nodes.size()) - 1);
    }
    for (std::size_t level = 1; level < theta.partitions.size(); ++level) {
        const Partition& prev = theta.partitions[level - 1];
        const Partition& cur = theta.partitions[level];
        std::vector<int> next_node(cur.blocks.size(), -1);
        for (std::size_t k = 0; k < cur.blocks.size(); ++k) {
            std::vector<int> children;
            for (std::size_t c = 0; c < prev.blocks.size(); ++c)
                if (cur.block_of(prev.blocks[c].front()) == static_cast<int>(k))
                    children.push_back(block_node[c]);
            if (children.size() == 1) {
                next_node[k] = children.front();
            } else {
                NewickNode internal;
                internal.height = theta.breakpoints[level];
                internal.children = std::move(children);
                nodes.push_back(std::move(internal));
                next_node[k] = static_cast<int>(nodes.size()) - 1;
            }
        }
        block_node = std::move(next_node);
    }
    std::ostringstream os;
    if (n == 1) {
        os << theta.labels[0];
    } else {
        emit_newick(theta, nodes, block_node.front(), 0.0, true, os);
    }
    os << ';';
    return os.str();
}

}  // namespace hcstab
