#include <doctest.h>

#include <cmath>

#include "hcstab/random.hpp"
#include "hcstab/stability.hpp"

using namespace hcstab;

namespace {

FiniteMetricSpace x0257() {
    return build_metric({"0", "2", "5", "7"},
                        {{0, 2, 5, 7}, {2, 0, 3, 5}, {5, 3, 0, 2}, {7, 5, 2, 0}});
}

// two tight pairs, all cross distances tied at 3
FiniteMetricSpace tied_cross() {
    return build_metric({"a", "b", "c", "d"},
                        {{0, 1, 3, 3}, {1, 0, 3, 3}, {3, 3, 0, 1}, {3, 3, 1, 0}});
}

}  // namespace

TEST_CASE("gamma path endpoints and interpolation") {
    FiniteMetricSpace base = interval_space({1.0, 3.0});
    PathSpec spec = make_gamma_spec(base, {0, 1}, {2}, 3.0);

    CHECK(gamma_path(spec, 0.0).matrix() == base.matrix());
    CHECK(gamma_path(spec, 1.0).matrix() == interval_space({3.0}).matrix());

    FiniteMetricSpace mid = gamma_path(spec, 0.5);
    CHECK(mid.d(0, 1) == 0.5);            // within shrinks
    CHECK(mid.d(1, 2) == 3.0);            // cross at the frozen linkage value
    CHECK(mid.d(0, 2) == 0.5 * 4 + 1.5);  // (1-t)d + tR

    CHECK_THROWS_AS(gamma_path(spec, -0.1), Error);
    CHECK_THROWS_AS(gamma_path(spec, 1.1), Error);
    CHECK_THROWS_AS(make_gamma_spec(base, {0, 1}, {1, 2}, 3.0), Error);
    CHECK_THROWS_AS(make_gamma_spec(base, {0}, {2}, 3.0), Error);  // point 1 uncovered
}

TEST_CASE("gamma regularity: each standard linkage is constant at its own value") {
    FiniteMetricSpace base = x0257();
    struct Row {
        LinkageSpec linkage;
        double r;
    };
    for (const Row& row : {Row{make_sl(), 3.0}, Row{make_cl(), 7.0}, Row{make_al(), 5.0}}) {
        PathSpec spec = make_gamma_spec(base, {0, 1}, {2, 3}, row.r);
        RegularityReport rep = gamma_regularity_check(row.linkage, spec, 50);
        INFO(row.linkage.name);
        CHECK(rep.constant);
        CHECK(rep.equals_r);
    }

    // the exotic linkage drifts along the same path: regularity fails
    PathSpec spec = make_gamma_spec(base, {0, 1}, {2, 3}, 0.75);
    RegularityReport rep = gamma_regularity_check(make_exotic(), spec, 50);
    CHECK_FALSE(rep.constant);
    CHECK_FALSE(rep.equals_r);
    CHECK(rep.min_value < rep.max_value);
}

TEST_CASE("bridge path construction and endpoints") {
    BridgeSpace bs = prop_bridge_space(1, 0.5);
    PathSpec spec = make_bridge_spec(bs.space, bs.block1, bs.block2);
    CHECK(spec.kind == PathKind::bridge_double);
    CHECK(spec.r == 2.0);
    CHECK(spec.delta == 0.5);
    CHECK(spec.bridge1 == 0);
    CHECK(spec.bridge2 == 3);

    CHECK(bridge_path(spec, 0.0).matrix() == bs.space.matrix());
    CHECK(bridge_path(spec, 1.0).matrix() == interval_space({0.5, 2.0, 0.5}).matrix());

    for (int s = 0; s <= 10; ++s) {
        double t = s / 10.0;
        FiniteMetricSpace m = bridge_path(spec, t);
        if (t < 1.0) CHECK(m.d(0, 3) == 2.0);  // bridge pair pinned at R
    }
}

TEST_CASE("single-edge bridge variant for a singleton block") {
    FiniteMetricSpace base =
        build_metric({"a", "b", "c"}, {{0, 1, 3}, {1, 0, 2}, {3, 2, 0}});
    PathSpec spec = make_bridge_spec(base, {2}, {0, 1});  // swapped into canonical order
    CHECK(spec.kind == PathKind::bridge_single);
    CHECK(spec.r == 2.0);
    CHECK(spec.delta == 1.0);
    CHECK(spec.bridge1 == 1);
    CHECK(spec.bridge2 == 2);
    CHECK(bridge_path(spec, 1.0).matrix() == interval_space({1.0, 2.0}).matrix());
    CHECK(bridge_path(spec, 0.5).d(1, 2) == 2.0);

    CHECK_THROWS_AS(make_bridge_spec(tied_cross(), {0, 1}, {2, 3}), Error);
}

TEST_CASE("no cross distance falls strictly between R and R+delta") {
    BridgeSpace bs = prop_bridge_space(2, 0.75);
    PathSpec spec = make_bridge_spec(bs.space, bs.block1, bs.block2);
    std::mt19937_64 rng(404);
    for (int s = 0; s < 300; ++s) {
        double t = uniform01(rng);
        FiniteMetricSpace m = bridge_path(spec, t);
        for (int x : spec.block1)
            for (int y : spec.block2) {
                double d = m.d(x, y);
                CHECK_FALSE((d > spec.r + 1e-12 && d < spec.r + spec.delta - 1e-12));
            }
    }
}

TEST_CASE("path continuity: GH steps obey the slope bound") {
    FiniteMetricSpace base = x0257();
    PathSpec gamma = make_gamma_spec(base, {0, 1}, {2, 3}, 3.0);
    ContinuityReport g = path_continuity_check(gamma, 21);
    CHECK(g.passed);
    CHECK(g.max_ratio <= 1.0 + 1e-9);

    BridgeSpace bs = prop_bridge_space(1, 0.5);
    PathSpec bridge = make_bridge_spec(bs.space, bs.block1, bs.block2);
    ContinuityReport b = path_continuity_check(bridge, 21);
    CHECK(b.passed);
    CHECK(b.max_step_gap > 0.0);

    CHECK_THROWS_AS(path_continuity_check(gamma, 1), Error);
}

TEST_CASE("prop_bridge_space shape and the bridging certificate") {
    BridgeSpace bs = prop_bridge_space(1, 0.5);
    CHECK(bs.space.size() == 6);
    CHECK(bs.space.labels()[0] == "x0");
    CHECK(bs.space.labels()[3] == "y0");
    CHECK(bs.space.d(0, 3) == 2.0);
    CHECK(bs.space.d(1, 4) == 2.5);

    auto edge = bridged_by_single_edge(bs.space, 1.0, bs.block1, bs.block2);
    REQUIRE(edge.has_value());
    CHECK(edge->b1 == 0);
    CHECK(edge->b2 == 3);
    CHECK(edge->r == 2.0);

    FiniteMetricSpace tie = tied_cross();
    CHECK_FALSE(bridged_by_single_edge(tie, 1.0, {0, 1}, {2, 3}).has_value());
    CHECK_THROWS_AS(bridged_by_single_edge(tie, 0.5, {0, 1}, {2, 3}), Error);
    CHECK_THROWS_AS(prop_bridge_space(0), Error);
}

TEST_CASE("instability scan certifies the flip for SL(1) on the bridge path") {
    BridgeSpace bs = prop_bridge_space(1, 1.0);  // gap 1 so delta = 1
    PathSpec path = make_bridge_spec(bs.space, bs.block1, bs.block2);
    REQUIRE(path.delta == 1.0);

    WitnessPair w = instability_scan(method_sl_alpha(1.0), path, 0.5);
    CHECK(w.s2 - w.s1 <= 0.5 + 1e-12);
    CHECK_FALSE(w.merged_at_r_s1);
    CHECK(w.merged_at_r_s2);
    CHECK(w.output_gap >= path.delta / 2.0 - 1e-9);
    CHECK(w.output_gap_exact);
    CHECK(w.input_gap < bs.space.diameter());

    // plain single linkage merges through the bridge at both ends: no flip
    CHECK_THROWS_AS(instability_scan(method_standard(make_sl()), path, 0.5), Error);
}

TEST_CASE("finer scans shrink the input gap while the output gap persists") {
    BridgeSpace bs = prop_bridge_space(1, 1.0);
    PathSpec path = make_bridge_spec(bs.space, bs.block1, bs.block2);
    WitnessPair coarse = instability_scan(method_sl_alpha(1.0), path, 0.25);
    WitnessPair fine = instability_scan(method_sl_alpha(1.0), path, 1e-4);
    CHECK(fine.input_gap < coarse.input_gap);
    CHECK(fine.input_gap <= 1e-4 * (bs.space.diameter() + path.r + 2 * path.delta) / 2);
    CHECK(fine.output_gap >= 0.5 - 1e-9);
}

TEST_CASE("complete-linkage counterexample family") {
    for (int k : {0, 1, 2}) {
        CLFamily f = cl_counterexample(k);
        const int side = k + 3;
        CHECK(f.delta == 1.0 / (k + 1));
        CHECK(f.epsilon == f.delta / 2);
        CHECK(f.x.size() == 2 * side);
        CHECK(is_ultrametric(f.u));

        // the canonical matching has distortion at most delta
        CHECK(distortion(f.tau, f.x, f.u) <= f.delta + 1e-12);

        // anchor distances
        CHECK(f.x.d(0, side) == 1.0);            // a_-2 -- b_-2
        CHECK(f.x.d(1, side + 1) == 1.0 + f.delta);
        CHECK(f.x.d(0, 1) == 0.5);
        CHECK(f.u.d(0, side) == 1.0);

        // CL keeps the oldest pair apart until 1 + k*eps + delta, exactly
        Ultrametric out = eta(run_standard(f.x, make_cl()).dendrogram);
        CHECK(out.d(0, side) == 1.0 + k * f.epsilon + f.delta);
    }
    CHECK_THROWS_AS(cl_counterexample(-1), Error);
}

TEST_CASE("CL output stays far from the limit ultrametric while inputs converge") {
    CLFamily f = cl_counterexample(0);  // six points: exact GH is affordable
    Ultrametric out = eta(run_standard(f.x, make_cl()).dendrogram);
    GHResult gh = gh_exact(out, f.u);
    REQUIRE(gh.exact);
    CHECK(gh.value >= 0.5 - 1e-12);
    CHECK(gh_upper_from(f.tau, f.x, f.u) <= f.delta / 2 + 1e-12);
}

TEST_CASE("semistability probe: SL stays within half the noise level") {
    Ultrametric u = scale(random_ultrametric(5, 0, 2718), 32.0);
    REQUIRE(min_distance_gap(u) >= 0.5);  // heights are multiples of 32/64
    PerturbationReport rep =
        semistability_probe(u, method_standard(make_sl()), {0.4, 0.2}, 8, 99);
    REQUIRE(rep.per_level.size() == 2);
    for (const LevelStats& stats : rep.per_level) {
        CHECK(stats.exact);
        CHECK(stats.max_gh <= stats.level / 2.0 + 1e-12);
        CHECK(stats.mean_gh <= stats.max_gh);
    }
}

TEST_CASE("semistability probe: zero noise reproduces the input exactly") {
    Ultrametric u = scale(random_ultrametric(6, 0, 5), 16.0);
    PerturbationReport rep =
        semistability_probe(u, method_standard(make_al()), {0.0}, 3, 1);
    CHECK(rep.per_level[0].max_gh == 0.0);
}

TEST_CASE("semistability probe: parameter validation") {
    Ultrametric u = scale(random_ultrametric(5, 0, 11), 16.0);
    MethodSpec sl = method_standard(make_sl());
    CHECK_THROWS_AS(semistability_probe(u, sl, {}, 5, 0), Error);
    CHECK_THROWS_AS(semistability_probe(u, sl, {0.1}, 0, 0), Error);
    CHECK_THROWS_AS(semistability_probe(u, sl, {1000.0}, 5, 0), Error);    // >= gap
    CHECK_THROWS_AS(semistability_probe(u, sl, {0.1, 0.1}, 5, 0), Error);  // not decreasing
    CHECK_THROWS_AS(semistability_probe(interval_space({1.0, 1.0}), sl, {0.1}, 5, 0),
                    Error);  // not an ultrametric
}

TEST_CASE("probe results are deterministic for a fixed seed") {
    Ultrametric u = scale(random_ultrametric(5, 0, 2718), 32.0);
    MethodSpec method = method_sl_alpha(2.0);
    PerturbationReport a = semistability_probe(u, method, {0.3, 0.15}, 6, 42);
    PerturbationReport b = semistability_probe(u, method, {0.3, 0.15}, 6, 42);
    for (std::size_t i = 0; i < a.per_level.size(); ++i) {
        CHECK(a.per_level[i].max_gh == b.per_level[i].max_gh);
        CHECK(a.per_level[i].mean_gh == b.per_level[i].mean_gh);
    }
}

TEST_CASE("SL(alpha) agrees with plain SL on the interval endpoints") {
    for (const FiniteMetricSpace& space :
         {interval_space({2.0}), interval_space({1.0, 2.0}),
          interval_space({1.0, 2.0, 1.0})}) {
        Dendrogram a = sl_alpha(space, 1.0).dendrogram;
        Dendrogram b = run_standard(space, make_sl()).dendrogram;
        CHECK(a == b);
    }
}
