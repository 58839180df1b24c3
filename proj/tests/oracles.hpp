// Independent brute-force oracles used to pin expected values in tests.
// These deliberately avoid the library's own algorithms.
#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <vector>

#include "hcstab/gromov_hausdorff.hpp"
#include "hcstab/metric.hpp"

namespace oracle {

/// Exact GH by enumerating every covering relation on X x Y. Feasible for
/// |X|*|Y| <= ~20 bits.
inline double brute_gh(const hcstab::FiniteMetricSpace& x, const hcstab::FiniteMetricSpace& y) {
    const int n = x.size(), m = y.size();
    const int bits = n * m;
    double best = std::numeric_limits<double>::infinity();
    for (std::uint64_t rel = 1; rel < (std::uint64_t{1} << bits); ++rel) {
        // coverage
        bool covers = true;
        for (int i = 0; i < n && covers; ++i) {
            bool hit = false;
            for (int j = 0; j < m; ++j)
                if (rel & (std::uint64_t{1} << (i * m + j))) { hit = true; break; }
            covers = hit;
        }
        for (int j = 0; j < m && covers; ++j) {
            bool hit = false;
            for (int i = 0; i < n; ++i)
                if (rel & (std::uint64_t{1} << (i * m + j))) { hit = true; break; }
            covers = hit;
        }
        if (!covers) continue;

        double dis = 0.0;
        for (int i = 0; i < n && dis < best; ++i)
            for (int j = 0; j < m; ++j) {
                if (!(rel & (std::uint64_t{1} << (i * m + j)))) continue;
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < m; ++l) {
                        if (!(rel & (std::uint64_t{1} << (k * m + l)))) continue;
                        dis = std::max(dis, std::abs(x.d(i, k) - y.d(j, l)));
                    }
            }
        best = std::min(best, dis);
        if (best == 0.0) break;
    }
    return best / 2.0;
}

/// Max clique size by subset enumeration; adjacency as bitmasks, n <= ~20.
inline int brute_max_clique(const std::vector<std::uint64_t>& adj) {
    const int n = static_cast<int>(adj.size());
    int best = 0;
    for (std::uint64_t s = 1; s < (std::uint64_t{1} << n); ++s) {
        bool clique = true;
        for (int v = 0; v < n && clique; ++v)
            if (s & (std::uint64_t{1} << v))
                if ((s & ~(adj[v] | (std::uint64_t{1} << v))) != 0) clique = false;
        if (clique) best = std::max(best, std::popcount(s));
    }
    return best;
}

/// Single-linkage ultrametric as the minimax path closure (Floyd-Warshall
/// with max along a path, min over paths).
inline std::vector<std::vector<double>> minimax_closure(const hcstab::FiniteMetricSpace& m) {
    const int n = m.size();
    auto u = m.matrix();
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                u[i][j] = std::min(u[i][j], std::max(u[i][k], u[k][j]));
    return u;
}

}  // namespace oracle
