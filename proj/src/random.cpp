#include "hcstab/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "hcstab/dendrogram.hpp"

namespace hcstab {

FiniteMetricSpace random_metric(int n, std::uint64_t seed) {
    if (n < 1) throw Error("EmptyInput", "need at least one point");
    std::mt19937_64 rng(seed);
    std::vector<std::array<double, 3>> pts(n);
    for (auto& p : pts)
        for (double& c : p) c = uniform01(rng);
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i));
    std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (int c = 0; c < 3; ++c) s += (pts[i][c] - pts[j][c]) * (pts[i][c] - pts[j][c]);
            dist[i][j] = dist[j][i] = std::sqrt(s);
        }
    return FiniteMetricSpace::create(std::move(labels), std::move(dist));
}

Ultrametric random_ultrametric(int n, int depth, std::uint64_t seed) {
    if (n < 1) throw Error("EmptyInput", "need at least one point");
    std::mt19937_64 rng(seed);
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) labels.push_back("u" + std::to_string(i));

    std::vector<double> breakpoints{0.0};
    std::vector<Partition> partitions{Partition::singletons(n)};
    std::vector<std::vector<int>> blocks;
    for (int i = 0; i < n; ++i) blocks.push_back({i});

    // heights are multiples of 1/64 so later averaging stays exact
    double height = 0.0;
    while (blocks.size() > 1) {
        height += uniform_int(rng, 1, 8) * 0x1.0p-6;
        int levels_so_far = static_cast<int>(breakpoints.size()) - 1;
        int group;
        if (depth > 0 && levels_so_far + 1 >= depth) {
            group = static_cast<int>(blocks.size());  // close out at the cap
        } else {
            group = std::min<int>(static_cast<int>(blocks.size()),
                                  uniform_int(rng, 2, 3));
        }
        // merge `group` random distinct blocks
        std::vector<int> ids(blocks.size());
        for (std::size_t k = 0; k < blocks.size(); ++k) ids[k] = static_cast<int>(k);
        for (int k = 0; k < group; ++k)
            std::swap(ids[k], ids[uniform_int(rng, k, static_cast<int>(ids.size()) - 1)]);
        std::vector<int> merged;
        std::vector<std::size_t> victims;
        for (int k = 0; k < group; ++k) {
            merged.insert(merged.end(), blocks[ids[k]].begin(), blocks[ids[k]].end());
            victims.push_back(static_cast<std::size_t>(ids[k]));
        }
        std::sort(merged.begin(), merged.end());
        std::sort(victims.rbegin(), victims.rend());
        for (std::size_t v : victims) blocks.erase(blocks.begin() + v);
        blocks.push_back(std::move(merged));

        Partition p;
        p.blocks = blocks;
        p.canonicalize();
        breakpoints.push_back(height);
        partitions.push_back(std::move(p));
    }
    if (n == 1) return FiniteMetricSpace::create(std::move(labels), {{0.0}});
    Dendrogram theta =
        validate_dendrogram(std::move(labels), std::move(breakpoints), std::move(partitions));
    return eta(theta);
}

}  // namespace hcstab
