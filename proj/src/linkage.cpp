#include "hcstab/linkage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hcstab/random.hpp"

namespace hcstab {

namespace {

void require_valid_blocks(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.empty() || b.empty()) throw Error("EmptyBlock", "linkage needs nonempty blocks");
    for (int x : a)
        for (int y : b)
            if (x == y) throw Error("OverlappingBlocks", "blocks share point " + std::to_string(x));
}

}  // namespace

double linkage_sl(const std::vector<int>& a, const std::vector<int>& b,
                  const FiniteMetricSpace& m) {
    require_valid_blocks(a, b);
    double best = std::numeric_limits<double>::infinity();
    for (int x : a)
        for (int y : b) best = std::min(best, m.d(x, y));
    return best;
}

double linkage_cl(const std::vector<int>& a, const std::vector<int>& b,
                  const FiniteMetricSpace& m) {
    require_valid_blocks(a, b);
    double best = 0.0;
    for (int x : a)
        for (int y : b) best = std::max(best, m.d(x, y));
    return best;
}

double linkage_al(const std::vector<int>& a, const std::vector<int>& b,
                  const FiniteMetricSpace& m) {
    require_valid_blocks(a, b);
    // deterministic index-order accumulation
    double sum = 0.0;
    for (int x : a)
        for (int y : b) sum += m.d(x, y);
    return sum / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

double exotic_linkage(const std::vector<int>& a, const std::vector<int>& b,
                      const FiniteMetricSpace& m) {
    return linkage_sl(a, b, m) / static_cast<double>(a.size() + b.size());
}

LinkageSpec make_sl() { return {"sl", linkage_sl}; }
LinkageSpec make_cl() { return {"cl", linkage_cl}; }
LinkageSpec make_al() { return {"al", linkage_al}; }
LinkageSpec make_exotic() { return {"exotic", exotic_linkage}; }

LinkageSpec linkage_by_name(const std::string& name) {
    if (name == "sl") return make_sl();
    if (name == "cl") return make_cl();
    if (name == "al") return make_al();
    if (name == "exotic") return make_exotic();
    throw Error("UnknownLinkage", name);
}

Dendrogram dendrogram_from_trace(const FiniteMetricSpace& m, const RunTrace& trace) {
    const int n = m.size();
    std::vector<double> candidates{0.0};
    for (const auto& r : trace.rounds) candidates.push_back(r.level);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    std::vector<double> breakpoints;
    std::vector<Partition> partitions;
    for (double t : candidates) {
        int last = -1;
        for (std::size_t i = 0; i < trace.rounds.size(); ++i)
            if (trace.rounds[i].level <= t) last = static_cast<int>(i);
        breakpoints.push_back(t);
        partitions.push_back(last < 0 ? Partition::singletons(n)
                                      : trace.rounds[last].partition);
    }
    return validate_dendrogram(m.labels(), std::move(breakpoints), std::move(partitions));
}

ClusterResult run_standard(const FiniteMetricSpace& m, const LinkageSpec& linkage) {
    const int n = m.size();
    std::vector<std::vector<int>> blocks;
    for (int i = 0; i < n; ++i) blocks.push_back({i});

    RunTrace trace;
    while (blocks.size() > 1) {
        const int k = static_cast<int>(blocks.size());
        double level = std::numeric_limits<double>::infinity();
        std::vector<std::vector<double>> link(k, std::vector<double>(k, 0.0));
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j) {
                link[i][j] = linkage.evaluate(blocks[i], blocks[j], m);
                level = std::min(level, link[i][j]);
            }

        std::vector<std::pair<int, int>> edges;
        std::vector<int> comp(k);
        for (int i = 0; i < k; ++i) comp[i] = i;
        std::function<int(int)> find = [&](int x) {
            while (comp[x] != x) x = comp[x] = comp[comp[x]];
            return x;
        };
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                if (link[i][j] <= level) {
                    edges.emplace_back(i, j);
                    comp[find(i)] = find(j);
                }

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
        // canonical order keeps trace edge indices aligned with partitions
        std::sort(blocks.begin(), blocks.end(),
                  [](const auto& a, const auto& b) { return a.front() < b.front(); });

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

bool check_increasing(const RunTrace& trace) {
    for (std::size_t i = 1; i < trace.rounds.size(); ++i)
        if (!(trace.rounds[i].level > trace.rounds[i - 1].level)) return false;
    return true;
}

namespace {

std::string describe_pair(const std::vector<int>& a, const std::vector<int>& b) {
    std::ostringstream os;
    os << "A={";
    for (std::size_t i = 0; i < a.size(); ++i) os << (i ? "," : "") << a[i];
    os << "} B={";
    for (std::size_t i = 0; i < b.size(); ++i) os << (i ? "," : "") << b[i];
    os << "}";
    return os.str();
}

}  // namespace

HarnessReport axiom_harness(const LinkageSpec& linkage, int trials, std::uint64_t seed) {
    HarnessReport report;
    report.trials = trials;
    std::mt19937_64 rng(seed);
    const double tol = 1e-9;

    for (int trial = 0; trial < trials; ++trial) {
        const int n = uniform_int(rng, 4, 8);
        FiniteMetricSpace m = random_metric(n, rng());

        // random disjoint nonempty blocks
        std::vector<int> perm(n);
        for (int i = 0; i < n; ++i) perm[i] = i;
        for (int i = 0; i < n; ++i) std::swap(perm[i], perm[uniform_int(rng, i, n - 1)]);
        int na = uniform_int(rng, 1, n - 1);
        int nb = uniform_int(rng, 1, n - na);
        std::vector<int> a(perm.begin(), perm.begin() + na);
        std::vector<int> b(perm.begin() + na, perm.begin() + na + nb);
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());

        const double value = linkage.evaluate(a, b, m);

        // representation independence: relabel the whole space
        {
            std::vector<int> relabel(n);
            for (int i = 0; i < n; ++i) relabel[i] = i;
            for (int i = 0; i < n; ++i)
                std::swap(relabel[i], relabel[uniform_int(rng, i, n - 1)]);
            std::vector<std::string> labels(n);
            std::vector<std::vector<double>> dist(n, std::vector<double>(n));
            for (int i = 0; i < n; ++i) {
                labels[relabel[i]] = m.labels()[i];
                for (int j = 0; j < n; ++j) dist[relabel[i]][relabel[j]] = m.d(i, j);
            }
            FiniteMetricSpace m2 = FiniteMetricSpace::create(labels, dist);
            auto map_block = [&](const std::vector<int>& blk) {
                std::vector<int> out;
                for (int x : blk) out.push_back(relabel[x]);
                std::sort(out.begin(), out.end());
                return out;
            };
            double v2 = linkage.evaluate(map_block(a), map_block(b), m2);
            if (std::abs(v2 - value) > tol * std::max(1.0, std::abs(value))) {
                report.representation_independent = false;
                if (report.counterexample.empty())
                    report.counterexample = "relabeling changed value at trial " +
                                            std::to_string(trial) + " " + describe_pair(a, b);
            }
        }

        // monotonicity: inflate cross distances, keep within-block distances
        {
            // each cross distance may grow by at most its triangle slack
            // min_z(d(x,z)+d(z,y)) - d(x,y); bumps computed against the
            // original metric only tighten right-hand sides, so the result
            // stays a metric by construction
            auto dist = m.matrix();
            for (int x : a)
                for (int y : b) {
                    double cap = std::numeric_limits<double>::infinity();
                    for (int z = 0; z < n; ++z)
                        if (z != x && z != y)
                            cap = std::min(cap, m.d(x, z) + m.d(z, y) - m.d(x, y));
                    dist[x][y] += cap * uniform_real(rng, 0.25, 1.0);
                    dist[y][x] = dist[x][y];
                }
            FiniteMetricSpace inflated = FiniteMetricSpace::create(m.labels(), dist);
            double v2 = linkage.evaluate(a, b, inflated);
            if (v2 < value - tol * std::max(1.0, std::abs(value))) {
                report.monotonic = false;
                if (report.counterexample.empty())
                    report.counterexample = "cross inflation decreased value at trial " +
                                            std::to_string(trial) + " " + describe_pair(a, b);
            }
        }

        // scale preservation with power-of-two factors (exact in binary fp)
        {
            const double factors[] = {0.5, 2.0, 4.0};
            double alpha = factors[uniform_int(rng, 0, 2)];
            double v2 = linkage.evaluate(a, b, scale(m, alpha));
            if (v2 != alpha * value) {
                report.scale_preserving = false;
                if (report.counterexample.empty())
                    report.counterexample = "scaling by " + std::to_string(alpha) +
                                            " broke homogeneity at trial " +
                                            std::to_string(trial);
            }
        }
    }
    return report;
}

}  // namespace hcstab
