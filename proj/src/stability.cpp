#include "hcstab/stability.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <random>
#include <thread>

#include "hcstab/dendrogram.hpp"
#include "hcstab/random.hpp"

namespace hcstab {

MethodSpec method_standard(const LinkageSpec& linkage) {
    return {linkage.name,
            [linkage](const FiniteMetricSpace& m) { return run_standard(m, linkage); }};
}

MethodSpec method_almost_standard(const LinkageSpec& linkage, const UnchainingSpec& condition) {
    return {linkage.name + "+" + condition.name,
            [linkage, condition](const FiniteMetricSpace& m) {
                return run_almost_standard(m, linkage, condition);
            }};
}

MethodSpec method_sl_alpha(double alpha) {
    return {"sl-alpha:" + std::to_string(alpha),
            [alpha](const FiniteMetricSpace& m) { return sl_alpha(m, alpha); }};
}

namespace {

void require_partition(const FiniteMetricSpace& base, const std::vector<int>& b1,
                       const std::vector<int>& b2) {
    if (b1.empty() || b2.empty())
        throw Error("TrivialPartition", "both blocks must be nonempty");
    std::vector<char> seen(base.size(), 0);
    for (int x : b1) {
        if (x < 0 || x >= base.size() || seen[x])
            throw Error("TrivialPartition", "blocks must partition the space");
        seen[x] = 1;
    }
    for (int x : b2) {
        if (x < 0 || x >= base.size() || seen[x])
            throw Error("TrivialPartition", "blocks must partition the space");
        seen[x] = 1;
    }
    for (char c : seen)
        if (!c) throw Error("TrivialPartition", "blocks must cover the space");
}

constexpr double kPathTol = 1e-9;

FiniteMetricSpace build_path_space(const FiniteMetricSpace& base,
                                   std::vector<std::vector<double>> dist) {
    MetricOptions options;
    options.tolerance = kPathTol;
    try {
        return FiniteMetricSpace::create(base.labels(), std::move(dist), options);
    } catch (const Error&) {
        throw Error("MetricViolation", "path point failed metric validation");
    }
}

}  // namespace

PathSpec make_gamma_spec(FiniteMetricSpace base, std::vector<int> block1,
                         std::vector<int> block2, double r) {
    require_partition(base, block1, block2);
    if (!(r > 0)) throw Error("TrivialPartition", "gamma path needs R > 0");
    PathSpec spec;
    spec.kind = PathKind::gamma;
    spec.base = std::move(base);
    spec.block1 = std::move(block1);
    spec.block2 = std::move(block2);
    spec.r = r;
    return spec;
}

PathSpec make_bridge_spec(FiniteMetricSpace base, std::vector<int> block1,
                          std::vector<int> block2) {
    require_partition(base, block1, block2);
    if (block1.size() < block2.size()) std::swap(block1, block2);
    if (block1.size() < 2)
        throw Error("TrivialPartition", "bridge path needs a block with at least two points");

    double r = std::numeric_limits<double>::infinity();
    int hits = 0, e1 = -1, e2 = -1;
    for (int x : block1)
        for (int y : block2) {
            double d = base.d(x, y);
            if (d < r) { r = d; hits = 1; e1 = x; e2 = y; }
            else if (d == r) ++hits;
        }
    if (hits != 1)
        throw Error("BridgeNotUnique", "minimal cross edge is tied");

    PathSpec spec;
    spec.kind = block2.size() == 1 ? PathKind::bridge_single : PathKind::bridge_double;
    spec.delta = min_distance_gap(base);
    spec.base = std::move(base);
    spec.block1 = std::move(block1);
    spec.block2 = std::move(block2);
    spec.bridge1 = e1;
    spec.bridge2 = e2;
    spec.r = r;
    return spec;
}

FiniteMetricSpace gamma_path(const PathSpec& spec, double t) {
    if (spec.kind != PathKind::gamma) throw Error("WrongPathKind", "gamma spec expected");
    if (t < 0.0 || t > 1.0) throw Error("ParameterOutOfRange", "t must lie in [0,1]");
    if (t == 1.0) return interval_space({spec.r});

    const int n = spec.base.size();
    Partition part;
    part.blocks = {spec.block1, spec.block2};
    part.canonicalize();
    auto dist = spec.base.matrix();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            if (part.block_of(i) == part.block_of(j))
                dist[i][j] = (1.0 - t) * spec.base.d(i, j);
            else
                dist[i][j] = (1.0 - t) * spec.base.d(i, j) + t * spec.r;
        }
    return build_path_space(spec.base, std::move(dist));
}

FiniteMetricSpace bridge_path(const PathSpec& spec, double t) {
    if (spec.kind != PathKind::bridge_single && spec.kind != PathKind::bridge_double)
        throw Error("WrongPathKind", "bridge spec expected");
    if (t < 0.0 || t > 1.0) throw Error("ParameterOutOfRange", "t must lie in [0,1]");
    const double r = spec.r, delta = spec.delta;
    if (t == 1.0)
        return spec.kind == PathKind::bridge_single ? interval_space({delta, r})
                                                    : interval_space({delta, r, delta});

    const int n = spec.base.size();
    std::vector<int> side(n, 0);
    for (int x : spec.block2) side[x] = 1;
    const int b1 = spec.bridge1, b2 = spec.bridge2;

    auto dist = spec.base.matrix();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double d = spec.base.d(i, j);
            const bool has_b1 = (i == b1 || j == b1), has_b2 = (i == b2 || j == b2);
            if (side[i] == side[j]) {
                // within a block: the bridge endpoint drifts delta away
                dist[i][j] = (has_b1 || has_b2) ? (1.0 - t) * d + t * delta
                                                : (1.0 - t) * d;
            } else if (has_b1 && has_b2) {
                dist[i][j] = r;  // the bridge edge is pinned
            } else if (has_b1 || has_b2) {
                dist[i][j] = (1.0 - t) * d + t * (r + delta);
            } else {
                dist[i][j] = (1.0 - t) * d + t * (r + 2.0 * delta);
            }
        }
    return build_path_space(spec.base, std::move(dist));
}

FiniteMetricSpace path_point(const PathSpec& spec, double t) {
    return spec.kind == PathKind::gamma ? gamma_path(spec, t) : bridge_path(spec, t);
}

BridgeSpace prop_bridge_space(int alpha, double gap) {
    if (alpha < 1) throw Error("AlphaTooSmall", "prop_bridge_space needs alpha >= 1");
    if (!(gap > 0) || gap > 1.0)
        throw Error("ParameterOutOfRange",
                    "gap must lie in (0,1]: cross distances 2+gap must reach the "
                    "bridge within one unit step");
    const int side = alpha + 2;
    const int n = 2 * side;
    std::vector<std::string> labels(n);
    for (int i = 0; i < side; ++i) {
        labels[i] = "x" + std::to_string(i);
        labels[side + i] = "y" + std::to_string(i);
    }
    std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            bool same = (i < side) == (j < side);
            if (same)
                dist[i][j] = 1.0;
            else if ((i == 0 && j == side) || (i == side && j == 0))
                dist[i][j] = 2.0;
            else
                dist[i][j] = 2.0 + gap;
        }
    BridgeSpace out;
    out.space = FiniteMetricSpace::create(std::move(labels), std::move(dist));
    for (int i = 0; i < side; ++i) {
        out.block1.push_back(i);
        out.block2.push_back(side + i);
    }
    return out;
}

CLFamily cl_counterexample(int k) {
    if (k < 0) throw Error("ParameterOutOfRange", "k must be >= 0");
    const double delta = 1.0 / (k + 1.0);
    const double eps = delta / 2.0;
    const int side = k + 3;  // indices -2..k per chain
    const int n = 2 * side;

    auto chain_index = [side](bool b_side, int i) { return (b_side ? side : 0) + i + 2; };
    std::vector<std::string> xlabels(n), ulabels(n);
    for (int i = -2; i <= k; ++i) {
        xlabels[chain_index(false, i)] = "a" + std::to_string(i);
        xlabels[chain_index(true, i)] = "b" + std::to_string(i);
        ulabels[chain_index(false, i)] = "a~" + std::to_string(i);
        ulabels[chain_index(true, i)] = "b~" + std::to_string(i);
    }

    // same-chain height: 1/2 for the oldest pair, 1 through index 0, then
    // 1 + m*eps where m is the younger index
    auto within = [eps](int i, int j) {
        int m = std::max(i, j);
        if (m == -1) return 0.5;
        if (m == 0) return 1.0;
        return 1.0 + m * eps;
    };

    std::vector<std::vector<double>> xd(n, std::vector<double>(n, 0.0));
    std::vector<std::vector<double>> ud(n, std::vector<double>(n, 0.0));
    for (int i = -2; i <= k; ++i)
        for (int j = -2; j <= k; ++j) {
            int m = std::max(i, j);
            // same chain
            if (i != j) {
                double w = within(i, j);
                xd[chain_index(false, i)][chain_index(false, j)] = w;
                xd[chain_index(true, i)][chain_index(true, j)] = w;
                ud[chain_index(false, i)][chain_index(false, j)] = w;
                ud[chain_index(true, i)][chain_index(true, j)] = w;
            }
            // cross chain a_i -- b_j
            double xc, uc;
            if (i == -2 && j == -2) {
                xc = 1.0;
                uc = 1.0;
            } else if (m == -1 && i != j) {
                // mixed oldest pairs: 1 + eps keeps the triangle through the
                // 1/2-edges while staying within delta of the ultrametric
                xc = 1.0 + eps;
                uc = 1.0;
            } else if (m <= 0) {
                xc = 1.0 + delta;
                uc = 1.0;
            } else {
                xc = 1.0 + m * eps + delta;
                uc = 1.0 + m * eps;
            }
            xd[chain_index(false, i)][chain_index(true, j)] = xc;
            xd[chain_index(true, j)][chain_index(false, i)] = xc;
            ud[chain_index(false, i)][chain_index(true, j)] = uc;
            ud[chain_index(true, j)][chain_index(false, i)] = uc;
        }

    CLFamily out;
    try {
        out.x = FiniteMetricSpace::create(std::move(xlabels), std::move(xd));
        out.u = FiniteMetricSpace::create(std::move(ulabels), std::move(ud));
    } catch (const Error&) {
        throw Error("MetricViolation", "counterexample construction failed validation");
    }
    out.u = as_ultrametric(out.u);
    for (int i = 0; i < n; ++i) out.tau.pairs.emplace_back(i, i);
    out.delta = delta;
    out.epsilon = eps;
    return out;
}

RegularityReport gamma_regularity_check(const LinkageSpec& linkage, const PathSpec& spec,
                                        int samples) {
    if (spec.kind != PathKind::gamma) throw Error("WrongPathKind", "gamma spec expected");
    if (samples < 1) throw Error("ParameterOutOfRange", "samples must be >= 1");
    RegularityReport report;
    report.r = spec.r;
    report.samples = samples;
    report.min_value = std::numeric_limits<double>::infinity();
    report.max_value = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        double t = static_cast<double>(i) / samples;  // t in [0,1)
        double v = linkage.evaluate(spec.block1, spec.block2, gamma_path(spec, t));
        report.min_value = std::min(report.min_value, v);
        report.max_value = std::max(report.max_value, v);
    }
    report.constant = report.max_value - report.min_value <= kPathTol;
    report.equals_r = report.constant && std::abs(report.max_value - spec.r) <= kPathTol &&
                      std::abs(report.min_value - spec.r) <= kPathTol;
    return report;
}

namespace {

/// Matches each base point with its image in the path endpoint Gamma(1).
Correspondence collapse_correspondence(const PathSpec& spec) {
    Correspondence tau;
    if (spec.kind == PathKind::gamma) {
        for (int x : spec.block1) tau.pairs.emplace_back(x, 0);
        for (int x : spec.block2) tau.pairs.emplace_back(x, 1);
    } else {
        for (int x : spec.block1) tau.pairs.emplace_back(x, x == spec.bridge1 ? 1 : 0);
        for (int x : spec.block2)
            tau.pairs.emplace_back(x, x == spec.bridge2
                                          ? 2
                                          : (spec.kind == PathKind::bridge_single ? 2 : 3));
    }
    std::sort(tau.pairs.begin(), tau.pairs.end());
    return tau;
}

double step_gap(const PathSpec& spec, double s1, double s2) {
    FiniteMetricSpace a = path_point(spec, s1);
    if (s2 == 1.0) return gh_upper_from(collapse_correspondence(spec), a, path_point(spec, s2));
    return gh_upper_from(identity_correspondence(a.size()), a, path_point(spec, s2));
}

}  // namespace

ContinuityReport path_continuity_check(const PathSpec& spec, int grid) {
    if (grid < 2) throw Error("ParameterOutOfRange", "grid must be >= 2");
    ContinuityReport report;
    report.grid = grid;
    const double slope = (spec.base.diameter() + spec.r + 2.0 * spec.delta) / 2.0;
    for (int j = 0; j + 1 < grid; ++j) {
        double s1 = static_cast<double>(j) / (grid - 1);
        double s2 = static_cast<double>(j + 1) / (grid - 1);
        double gap = step_gap(spec, s1, s2);
        double bound = (s2 - s1) * slope;
        report.max_step_gap = std::max(report.max_step_gap, gap);
        if (bound > 0) report.max_ratio = std::max(report.max_ratio, gap / bound);
        if (gap > bound + kPathTol) report.passed = false;
    }
    return report;
}

namespace {

/// Whether the method's output joins the two sides at height <= R.
bool merged_at_r(const MethodSpec& method, const PathSpec& spec, double t) {
    FiniteMetricSpace space = path_point(spec, t);
    Ultrametric u = eta(method.run(space).dendrogram);
    int i, j;
    if (t == 1.0) {
        // endpoint blocks per construction: {p0,p1} vs the rest
        i = spec.kind == PathKind::gamma ? 0 : 1;
        j = spec.kind == PathKind::gamma ? 1 : 2;
    } else if (spec.kind == PathKind::gamma) {
        i = spec.block1.front();
        j = spec.block2.front();
    } else {
        i = spec.bridge1;
        j = spec.bridge2;
    }
    return u.d(i, j) <= spec.r + kPathTol;
}

}  // namespace

WitnessPair instability_scan(const MethodSpec& method, const PathSpec& path, double tol) {
    if (!(tol > 0)) throw Error("ParameterOutOfRange", "tol must be positive");
    bool at0 = merged_at_r(method, path, 0.0);
    bool at1 = merged_at_r(method, path, 1.0);
    if (at0 == at1)
        throw Error("NoBehaviorFlip", "method behaves identically at both path endpoints");

    double lo = 0.0, hi = 1.0;
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (merged_at_r(method, path, mid) == at1)
            hi = mid;
        else
            lo = mid;
    }

    WitnessPair witness;
    witness.s1 = lo;
    witness.s2 = hi;
    witness.merged_at_r_s1 = at0;
    witness.merged_at_r_s2 = at1;
    witness.input_gap = step_gap(path, lo, hi);

    Ultrametric u1 = eta(method.run(path_point(path, lo)).dendrogram);
    Ultrametric u2 = eta(method.run(path_point(path, hi)).dendrogram);
    if (u1.size() <= 8 && u2.size() <= 8) {
        GHResult gh = gh_exact(u1, u2);
        witness.output_gap = gh.lower;
        witness.output_gap_exact = gh.exact;
    } else {
        witness.output_gap = gh_lower_bound(u1, u2);
        witness.output_gap_exact = false;
    }

    if (path.kind != PathKind::gamma && witness.output_gap < path.delta / 2.0 - kPathTol)
        throw Error("OutputGapBelowBound",
                    "certified output gap fell below delta/2 (internal defect)");
    return witness;
}

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t level, std::uint64_t trial) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (level * 1'000'003ull + trial + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

FiniteMetricSpace perturb_space(const Ultrametric& u, double level, std::mt19937_64& rng) {
    const int n = u.size();
    for (int attempt = 0; attempt < 1000; ++attempt) {
        auto dist = u.matrix();
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                dist[i][j] += uniform_real(rng, -level / 2.0, level / 2.0);
                dist[j][i] = dist[i][j];
            }
        try {
            return FiniteMetricSpace::create(u.labels(), std::move(dist));
        } catch (const Error&) {
        }
    }
    throw Error("PerturbationFailed", "could not sample a metric perturbation");
}

}  // namespace

PerturbationReport semistability_probe(const Ultrametric& u, const MethodSpec& method,
                                       const std::vector<double>& levels, int trials,
                                       std::uint64_t seed) {
    as_ultrametric(u);
    if (levels.empty() || trials < 1)
        throw Error("ParameterOutOfRange", "need at least one level and one trial");
    const double gap = min_distance_gap(u);
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (levels[i] < 0 || levels[i] >= gap)
            throw Error("LevelTooLarge", "noise level must be < the minimal distance gap");
        if (i > 0 && !(levels[i] < levels[i - 1]))
            throw Error("LevelTooLarge", "noise levels must be strictly decreasing");
    }

    PerturbationReport report;
    report.trials = trials;
    for (std::size_t li = 0; li < levels.size(); ++li) {
        const double level = levels[li];
        std::vector<double> values(trials, 0.0);
        std::vector<char> exact(trials, 1);
        std::atomic<int> next{0};
        std::exception_ptr first_error;
        std::mutex error_mutex;

        auto worker = [&]() {
            for (;;) {
                int trial = next.fetch_add(1);
                if (trial >= trials) return;
                try {
                    std::mt19937_64 rng(mix_seed(seed, li, trial));
                    FiniteMetricSpace perturbed =
                        level > 0 ? perturb_space(u, level, rng) : u;
                    Ultrametric out = eta(method.run(perturbed).dendrogram);
                    GHResult gh = gh_exact(out, u);
                    values[trial] = gh.value;
                    exact[trial] = gh.exact ? 1 : 0;
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        };

        unsigned hw = std::thread::hardware_concurrency();
        int workers = std::min(trials, static_cast<int>(hw ? hw : 2));
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
        if (first_error) std::rethrow_exception(first_error);

        LevelStats stats;
        stats.level = level;
        double sum = 0.0;
        for (int t = 0; t < trials; ++t) {
            stats.max_gh = std::max(stats.max_gh, values[t]);
            sum += values[t];
            if (!exact[t]) stats.exact = false;
        }
        stats.mean_gh = sum / trials;
        report.per_level.push_back(stats);
    }
    return report;
}

std::optional<BridgeEdge> bridged_by_single_edge(const FiniteMetricSpace& m, double t,
                                                 const std::vector<int>& block1,
                                                 const std::vector<int>& block2) {
    Partition components = t_components(m, t);
    auto is_component = [&](std::vector<int> block) {
        std::sort(block.begin(), block.end());
        for (const auto& c : components.blocks)
            if (c == block) return true;
        return false;
    };
    if (!is_component(block1) || !is_component(block2))
        throw Error("NotTComponents", "blocks are not t-components of the space");

    double r = std::numeric_limits<double>::infinity();
    int hits = 0;
    BridgeEdge edge;
    for (int x : block1)
        for (int y : block2) {
            double d = m.d(x, y);
            if (d < r) { r = d; hits = 1; edge = {x, y, d}; }
            else if (d == r) ++hits;
        }
    if (hits != 1) return std::nullopt;
    return edge;
}

}  // namespace hcstab
