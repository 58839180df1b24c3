#include <doctest.h>

#include "hcstab/linkage.hpp"
#include "hcstab/random.hpp"

using namespace hcstab;

namespace {

FiniteMetricSpace x0257() {
    return build_metric({"0", "2", "5", "7"},
                        {{0, 2, 5, 7}, {2, 0, 3, 5}, {5, 3, 0, 2}, {7, 5, 2, 0}});
}

}  // namespace

TEST_CASE("linkage values on the 4-point example") {
    FiniteMetricSpace m = x0257();
    std::vector<int> a{0, 1}, b{2, 3};
    CHECK(linkage_sl(a, b, m) == 3.0);
    CHECK(linkage_cl(a, b, m) == 7.0);
    CHECK(linkage_al(a, b, m) == (5.0 + 7 + 3 + 5) / 4);
    CHECK(exotic_linkage(a, b, m) == 3.0 / 4);

    CHECK_THROWS_AS(linkage_sl({}, b, m), Error);
    CHECK_THROWS_AS(linkage_sl({0, 2}, {2, 3}, m), Error);  // overlap
}

TEST_CASE("linkage_by_name") {
    CHECK(linkage_by_name("sl").name == "sl");
    CHECK(linkage_by_name("exotic").name == "exotic");
    CHECK_THROWS_AS(linkage_by_name("median"), Error);
}

TEST_CASE("standard single linkage on the 4-point example merges at 2 then 3") {
    ClusterResult r = run_standard(x0257(), make_sl());
    REQUIRE(r.trace.rounds.size() == 2);
    CHECK(r.trace.rounds[0].level == 2.0);
    CHECK(r.trace.rounds[0].partition.blocks ==
          std::vector<std::vector<int>>{{0, 1}, {2, 3}});
    CHECK(r.trace.rounds[1].level == 3.0);
    CHECK(r.dendrogram.breakpoints == std::vector<double>{0, 2, 3});
}

TEST_CASE("exotic linkage run: decreasing levels and single collapse at 3/4") {
    ClusterResult r = run_standard(x0257(), make_exotic());
    REQUIRE(r.trace.rounds.size() == 2);
    CHECK(r.trace.rounds[0].level == 1.0);   // min pair 2 over block size 2
    CHECK(r.trace.rounds[1].level == 0.75);  // 3 over 4 points
    CHECK_FALSE(check_increasing(r.trace));

    // theta jumps straight from singletons to one block at 3/4
    CHECK(r.dendrogram.breakpoints == std::vector<double>{0, 0.75});
    CHECK(r.dendrogram.partitions.back().block_count() == 1);
}

TEST_CASE("R_i strictly increases for sl, cl, al on random spaces") {
    for (int trial = 0; trial < 30; ++trial) {
        FiniteMetricSpace m = random_metric(4 + trial % 6, 300 + trial);
        for (const auto& linkage : {make_sl(), make_cl(), make_al()})
            CHECK(check_increasing(run_standard(m, linkage).trace));
    }
}

TEST_CASE("faithfulness on ultrametrics for sl, cl, al") {
    for (int trial = 0; trial < 20; ++trial) {
        Ultrametric u = random_ultrametric(4 + trial % 9, 0, 7100 + trial);
        for (const auto& linkage : {make_sl(), make_cl(), make_al()}) {
            Ultrametric out = eta(run_standard(u, linkage).dendrogram);
            CHECK(out.matrix() == u.matrix());
        }
    }
}

TEST_CASE("trace edge indices reference the canonical pre-merge partition") {
    FiniteMetricSpace m = random_metric(8, 42);
    ClusterResult r = run_standard(m, make_sl());
    Partition prev = Partition::singletons(8);
    for (const auto& round : r.trace.rounds) {
        for (auto [i, j] : round.merge_edges) {
            REQUIRE(i < prev.block_count());
            REQUIRE(j < prev.block_count());
            // merged blocks end up together afterwards
            CHECK(round.partition.block_of(prev.blocks[i].front()) ==
                  round.partition.block_of(prev.blocks[j].front()));
        }
        prev = round.partition;
    }
}

TEST_CASE("axiom harness passes for all shipped linkages") {
    for (const auto& linkage : {make_sl(), make_cl(), make_al(), make_exotic()}) {
        HarnessReport report = axiom_harness(linkage, 60, 11);
        INFO(linkage.name, ": ", report.counterexample);
        CHECK(report.all_passed());
    }
}

TEST_CASE("axiom harness flags a broken linkage") {
    LinkageSpec broken{"anti-monotone",
                       [](const std::vector<int>& a, const std::vector<int>& b,
                          const FiniteMetricSpace& m) {
                           return 1.0 / (1.0 + linkage_sl(a, b, m));
                       }};
    HarnessReport report = axiom_harness(broken, 60, 12);
    CHECK_FALSE(report.monotonic);
    CHECK_FALSE(report.counterexample.empty());
}

TEST_CASE("dendrogram_from_trace handles non-monotone level sequences") {
    // artificial trace: merge at 2, then a later round at level 1
    FiniteMetricSpace m = x0257();
    RunTrace trace;
    RunRound r1;
    r1.level = 2.0;
    r1.partition = Partition{{{0, 1}, {2}, {3}}};
    RunTrace t1;
    RunRound r2;
    r2.level = 1.0;
    r2.partition = Partition{{{0, 1, 2, 3}}};
    trace.rounds = {r1, r2};
    Dendrogram theta = dendrogram_from_trace(m, trace);
    // at t=1 the later (coarser) round applies; t=2 likewise
    CHECK(partition_at(theta, 1.0).block_count() == 1);
    CHECK(partition_at(theta, 0.5) == Partition::singletons(4));
}
