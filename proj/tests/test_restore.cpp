#include <doctest.h>

#include "fastker/errors.hpp"
#include "fastker/lp_reduction.hpp"
#include "support.hpp"

using namespace fastker;
using namespace fastker::testing;

TEST_SUITE("restore") {

TEST_CASE("validate_independent") {
    Graph k3 = complete_graph(3);
    const std::vector<VertexId> one{0}, two{0, 1}, none{}, out{7};
    CHECK(validate_independent(k3, one));
    CHECK_FALSE(validate_independent(k3, two));
    CHECK(validate_independent(k3, none));
    CHECK_THROWS_AS(validate_independent(k3, out), MalformedInput);
}

TEST_CASE("undo examples") {
    // P3 folded at 1: the fold site alone is the kernel MIS.
    {
        KernelizerConfig cfg;
        cfg.reductions.rules.degree_two_paths = false;
        cfg.reductions.rules.linear_program = false;
        Graph p3 = path_graph(3);
        Graph g = p3;
        GlobalHarness h(g);
        reduce_fold(h.ctx, 1);
        ReductionLog log;
        log.input_vertex_count = 3;
        log.append(LogSegment{0, kGlobalBlock, h.ctx.records});
        auto c = g.compact();
        const std::vector<VertexId> kernel_is{0};
        auto lifted = undo_all(log, c.graph, kernel_is, c.old_of_new, g.id_bound());
        CHECK(lifted == std::vector<VertexId>{0, 2});
    }
    // Star after the LP: the three leaves.
    {
        Graph g = star_graph(3);
        Matching m;
        std::vector<ReductionRecord> recs;
        RuleCounters rc;
        apply_lp(g, m, {}, recs, rc);
        ReductionLog log;
        log.input_vertex_count = 4;
        log.append(LogSegment{0, kGlobalBlock, recs});
        CHECK(undo_all(log, std::vector<std::uint8_t>(4, 0)) == std::vector<VertexId>{1, 2, 3});
    }
    // Empty log: the kernel set mapped through the vertex map.
    {
        ReductionLog log;
        log.input_vertex_count = 6;
        Graph kernel(3);
        const std::vector<VertexId> map{1, 3, 5};
        const std::vector<VertexId> set{0, 2};
        CHECK(undo_all(log, kernel, set, map, 6) == std::vector<VertexId>{1, 5});
    }
}

TEST_CASE("a dependent kernel set is rejected before replay") {
    ReductionLog log;
    log.input_vertex_count = 2;
    Graph kernel = graph_of(2, {{0, 1}});
    const std::vector<VertexId> map{0, 1}, set{0, 1};
    CHECK_THROWS_AS(undo_all(log, kernel, set, map, 2), MalformedInput);
}

TEST_CASE("defensive undo keeps an already selected neighbor") {
    ReductionLog log;
    log.input_vertex_count = 3;
    log.append(LogSegment{0, kGlobalBlock, {IsolatedCliqueRecord{0, {1, 2}}, DegreeOneRecord{1, 2}}});
    // Replay is newest first: the degree-one record picks 1, then the clique record keeps it.
    CHECK(undo_all(log, std::vector<std::uint8_t>(3, 0)) == std::vector<VertexId>{1});
}

TEST_CASE("gadgets left in the set are an invariant violation") {
    ReductionLog log;
    log.input_vertex_count = 2;
    std::vector<std::uint8_t> in{0, 0, 1};
    CHECK_THROWS_AS(undo_all(log, in), InvariantViolation);
}

TEST_CASE("undo ignores the order of block segments within a phase") {
    std::mt19937_64 rng(55);
    int shuffled = 0;
    for (int trial = 0; trial < 60; ++trial) {
        Graph g = gnp(30 + trial % 10, 0.06 + 0.02 * (trial % 3), rng);
        const auto want = std::int64_t(brute_force_mis(g).size);
        KernelizerConfig cfg;
        cfg.workers = 1;
        cfg.blocks = 4;
        cfg.seed = trial;
        cfg.mode = KernelMode::Full;
        auto r = kernelize(g, cfg);
        REQUIRE(lifted_mis_size(g, r) == want);
        // Shuffle each run of consecutive segments sharing a phase.
        auto& segs = r.log.segments;
        for (std::size_t i = 0; i < segs.size();) {
            std::size_t j = i;
            while (j < segs.size() && segs[j].phase == segs[i].phase) ++j;
            if (j - i > 1) {
                std::shuffle(segs.begin() + std::ptrdiff_t(i), segs.begin() + std::ptrdiff_t(j), rng);
                ++shuffled;
            }
            i = j;
        }
        CHECK(lifted_mis_size(g, r) == want);
    }
    CHECK(shuffled > 0);
}

}

TEST_SUITE("oracle") {

TEST_CASE("known values") {
    CHECK(brute_force_mis(cycle_graph(5)).size == 2);
    CHECK(mis_by_enumeration(cycle_graph(5)) == 2);
    CHECK(brute_force_mis(petersen_graph()).size == 4);
    for (std::size_t n = 1; n <= 8; ++n) CHECK(brute_force_mis(complete_graph(n)).size == 1);
    CHECK_THROWS_AS(brute_force_mis(Graph(41)), OracleRefusal);
    CHECK_THROWS_AS(lp_oracle(Graph(13)), OracleRefusal);
}

TEST_CASE("lp oracle examples") {
    auto edge = lp_oracle(graph_of(2, {{0, 1}}));
    CHECK(edge.doubled_objective == 2);
    CHECK(edge.half_set.empty());
    auto p3 = lp_oracle(path_graph(3));
    CHECK(p3.doubled_objective == 4);
    CHECK(p3.half_set.empty());
    auto one = lp_oracle(Graph(1));
    CHECK(one.doubled_objective == 2);
    CHECK(one.half_set.empty());
    auto c5 = lp_oracle(cycle_graph(5));
    CHECK(c5.doubled_objective == 5);
    CHECK(c5.half_set.size() == 5);
}

TEST_CASE("branch and bound agrees with enumeration") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 300; ++trial) {
        Graph g = gnp(1 + trial % 16, 0.05 + 0.1 * (trial % 8), rng);
        const auto bb = brute_force_mis(g);
        CHECK(bb.size == mis_by_enumeration(g));
        CHECK(bb.set.size() == bb.size);
        CHECK(validate_independent(g, bb.set));
    }
}

}
