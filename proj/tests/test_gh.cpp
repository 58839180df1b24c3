#include <doctest.h>

#include <algorithm>

#include "hcstab/gromov_hausdorff.hpp"
#include "hcstab/random.hpp"
#include "oracles.hpp"

using namespace hcstab;

TEST_CASE("distortion of explicit correspondences") {
    FiniteMetricSpace x = interval_space({1.0, 1.0});
    FiniteMetricSpace y = interval_space({1.0, 2.0});

    CHECK(distortion(identity_correspondence(3), x, y) == 1.0);  // |2-3| on the ends
    CHECK(distortion(identity_correspondence(3), x, x) == 0.0);

    Correspondence missing{{{0, 0}, {1, 1}}};  // point 2 uncovered on both sides
    CHECK_THROWS_AS(distortion(missing, x, y), Error);

    Correspondence fat{{{0, 0}, {0, 1}, {1, 2}, {2, 2}}};
    CHECK(distortion(fat, x, x) == 1.0);  // 0 matched to both 0 and 1
}

TEST_CASE("gh_exact matches the brute-force correspondence search") {
    std::mt19937_64 rng(505);
    for (int trial = 0; trial < 60; ++trial) {
        int n = uniform_int(rng, 2, 4);
        int m = uniform_int(rng, 2, 4);
        FiniteMetricSpace x = random_metric(n, 20000 + trial);
        FiniteMetricSpace y = random_metric(m, 30000 + trial);
        GHResult got = gh_exact(x, y);
        REQUIRE(got.exact);
        double want = oracle::brute_gh(x, y);
        CHECK(got.value == doctest::Approx(want).epsilon(1e-12));
        CHECK(got.lower == got.value);
        // the witness certifies the value as an upper bound
        CHECK(gh_upper_from(got.witness, x, y) == doctest::Approx(got.value));
    }
}

TEST_CASE("gh_exact is symmetric and vanishes on isometric spaces") {
    FiniteMetricSpace x = random_metric(5, 71);
    FiniteMetricSpace y = random_metric(5, 72);
    CHECK(gh_exact(x, y).value == doctest::Approx(gh_exact(y, x).value));
    CHECK(gh_exact(x, x).value == 0.0);

    // relabelled copy: permute points, GH must still be zero
    auto dist = x.matrix();
    std::vector<int> perm{4, 2, 0, 3, 1};
    std::vector<std::vector<double>> pd(5, std::vector<double>(5));
    std::vector<std::string> labels;
    for (int i = 0; i < 5; ++i) {
        labels.push_back(x.labels()[perm[i]]);
        for (int j = 0; j < 5; ++j) pd[i][j] = dist[perm[i]][perm[j]];
    }
    FiniteMetricSpace shuffled = build_metric(labels, pd);
    CHECK(gh_exact(x, shuffled).value == 0.0);
}

TEST_CASE("gh bounds bracket the exact value") {
    for (int trial = 0; trial < 30; ++trial) {
        FiniteMetricSpace x = random_metric(4, 40000 + trial);
        FiniteMetricSpace y = random_metric(4, 50000 + trial);
        GHResult r = gh_exact(x, y);
        CHECK(gh_lower_bound(x, y) <= r.value + 1e-12);
        CHECK(r.value <= gh_upper_from(identity_correspondence(4), x, y) + 1e-12);
    }
}

TEST_CASE("diameter gap is always half-certified") {
    FiniteMetricSpace x = interval_space({1.0});
    FiniteMetricSpace y = interval_space({5.0});
    GHResult r = gh_exact(x, y);
    CHECK(r.value == 2.0);
    CHECK(gh_lower_bound(x, y) == 2.0);

    // one point against an interval: GH = diam/2
    CHECK(gh_exact(build_metric({"p"}, {{0.0}}), y).value == 2.5);
}

TEST_CASE("budget exhaustion degrades to certified bounds") {
    FiniteMetricSpace x = random_metric(7, 313);
    FiniteMetricSpace y = random_metric(7, 314);
    GHResult r = gh_exact(x, y, 3);
    CHECK_FALSE(r.exact);
    CHECK(r.lower == gh_lower_bound(x, y));
    CHECK(r.lower <= r.value);
    CHECK(gh_upper_from(r.witness, x, y) == doctest::Approx(r.value));

    GHResult full = gh_exact(x, y);
    REQUIRE(full.exact);
    CHECK(full.value <= r.value + 1e-12);
}

TEST_CASE("gh scales linearly with the metric") {
    FiniteMetricSpace x = random_metric(4, 991);
    FiniteMetricSpace y = random_metric(5, 992);
    double base = gh_exact(x, y).value;
    double doubled = gh_exact(scale(x, 2.0), scale(y, 2.0)).value;
    CHECK(doubled == doctest::Approx(2.0 * base).epsilon(1e-12));
}
