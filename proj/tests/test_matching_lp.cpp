#include <doctest.h>

#include <functional>

#include "fastker/errors.hpp"
#include "fastker/lp_reduction.hpp"
#include "fastker/matching.hpp"
#include "support.hpp"

using namespace fastker;
using namespace fastker::testing;

namespace {

// Maximum bipartite matching by exhaustive augmenting search (simple Kuhn), kept
// apart from the library so it can serve as the reference.
std::size_t kuhn(std::size_t left, std::size_t right, const std::vector<Edge>& edges) {
    std::vector<std::vector<VertexId>> adj(left);
    for (auto e : edges) adj[e.u].push_back(e.v);
    std::vector<VertexId> mate(right, kNoVertex);
    std::size_t size = 0;
    for (std::size_t l = 0; l < left; ++l) {
        std::vector<char> seen(right, 0);
        std::function<bool(VertexId)> go = [&](VertexId u) {
            for (VertexId r : adj[u]) {
                if (seen[r]) continue;
                seen[r] = 1;
                if (mate[r] == kNoVertex || go(mate[r])) {
                    mate[r] = u;
                    return true;
                }
            }
            return false;
        };
        if (go(VertexId(l))) ++size;
    }
    return size;
}

std::vector<Edge> cover_edges(const Graph& g) {
    std::vector<Edge> out;
    for (VertexId v = 0; v < VertexId(g.id_bound()); ++v)
        g.for_each_neighbor(v, [&](VertexId u) { out.push_back({v, u}); });
    return out;
}

bool maximal(const BiDoubleGraph& bd, const Matching& m) {
    for (VertexId l = 0; l < VertexId(bd.left_bound()); ++l) {
        if (m.left[l] != kNoVertex) continue;
        for (VertexId r : bd.row(l))
            if (m.right[r] == kNoVertex) return false;
    }
    return true;
}

}  // namespace

TEST_SUITE("matching") {

TEST_CASE("bi-double construction") {
    auto edge = BiDoubleGraph::build(graph_of(2, {{0, 1}}));
    CHECK(edge.targets.size() == 2);
    CHECK(edge.adjacent(0, 1));
    CHECK(edge.adjacent(1, 0));
    CHECK_FALSE(edge.adjacent(0, 0));

    auto empty = BiDoubleGraph::build(Graph(3));
    CHECK(empty.targets.empty());
    CHECK(empty.left_bound() == 3);

    auto k3 = BiDoubleGraph::build(complete_graph(3));
    CHECK(k3.targets.size() == 6);

    Graph g = path_graph(3);
    g.hide(2);
    auto bd = BiDoubleGraph::build(g);
    CHECK(bd.row(2).empty());
    CHECK(bd.targets.size() == 2);
}

TEST_CASE("karp-sipser and augmentation on small covers") {
    auto edge = BiDoubleGraph::build(graph_of(2, {{0, 1}}));
    Matching m;
    karp_sipser(edge, m, 1);
    CHECK(m.size() == 2);
    CHECK(m.valid(edge));

    auto iso = BiDoubleGraph::build(Graph(4));
    Matching mi;
    CHECK(maximum_matching(iso, mi, true, 0) == 0);

    // P3: L0-R1, L1-R0, L1-R2, L2-R1. R1 is shared by L0 and L2, so the maximum is 2.
    auto p3 = BiDoubleGraph::build(path_graph(3));
    CHECK(kuhn(3, 3, cover_edges(path_graph(3))) == 2);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Matching mk;
        karp_sipser(p3, mk, seed);
        CHECK(mk.valid(p3));
        CHECK(maximal(p3, mk));
        CHECK(mk.size() * 2 >= 2);
        Matching full;
        CHECK(maximum_matching(p3, full, seed % 2 == 0, seed) == 2);
    }

    auto c5 = BiDoubleGraph::build(cycle_graph(5));
    Matching mc;
    karp_sipser(c5, mc, 3);
    augment_parallel(c5, mc);
    CHECK(mc.size() == 5);
    const auto before = mc.left;
    CHECK(augment_parallel(c5, mc) == 0);
    CHECK(hopcroft_karp(c5, mc) == 0);
    CHECK(mc.left == before);
}

TEST_CASE("matching reuse") {
    Graph g = cycle_graph(6);
    auto bd = BiDoubleGraph::build(g);
    Matching m;
    maximum_matching(bd, m, false, 0);
    const auto full = m;
    CHECK(reuse_matching(bd, m) == full.size());
    CHECK(m.left == full.left);

    const VertexId l = 0;
    const VertexId r = m.left[l];
    g.hide(r);
    auto bd2 = BiDoubleGraph::build(g);
    const auto kept = reuse_matching(bd2, m);
    CHECK(m.valid(bd2));
    // R_r and L_r are both gone; the pairs through them are dropped.
    std::size_t expected = 0;
    for (VertexId v = 0; v < 6; ++v)
        if (full.left[v] != kNoVertex && v != r && full.left[v] != r) ++expected;
    CHECK(kept == expected);

    for (VertexId v = 0; v < 6; ++v)
        if (g.alive(v)) g.hide(v);
    auto bd3 = BiDoubleGraph::build(g);
    CHECK(reuse_matching(bd3, m) == 0);
    CHECK(m.size() == 0);
}

TEST_CASE("random bipartite graphs: parallel, Hopcroft-Karp and reference agree") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t left = 1 + rng() % 60, right = 1 + rng() % 60;
        const double p = std::uniform_real_distribution<double>(0.01, 0.2)(rng);
        std::bernoulli_distribution coin(p);
        std::vector<Edge> edges;
        for (std::size_t a = 0; a < left; ++a)
            for (std::size_t b = 0; b < right; ++b)
                if (coin(rng)) edges.push_back({VertexId(a), VertexId(b)});
        auto bd = BiDoubleGraph::from_bipartite(left, right, edges);
        const auto want = kuhn(left, right, edges);
        Matching a, b, c;
        CHECK(maximum_matching(bd, a, true, trial) == want);
        CHECK(maximum_matching(bd, b, false, trial) == want);
        CHECK(hopcroft_karp(bd, c) == want);
        CHECK(a.valid(bd));
        CHECK(b.valid(bd));
        CHECK(c.valid(bd));
    }
}

}

TEST_SUITE("lp") {

TEST_CASE("half-integral examples") {
    auto solve = [](const Graph& g) {
        auto bd = BiDoubleGraph::build(g);
        Matching m;
        maximum_matching(bd, m, false, 0);
        return extract_half_integral(bd, m, false);
    };
    auto empty = solve(Graph(3));
    CHECK(empty.ones() == std::vector<VertexId>{0, 1, 2});

    // A single edge has optima (1,0), (0,1) and (1/2,1/2); no vertex is 1/2 in all of them.
    const auto edge = graph_of(2, {{0, 1}});
    auto se = solve(edge);
    CHECK(se.doubled_objective() == 2);
    CHECK(se.halves() == lp_oracle(edge).half_set);

    auto p3 = solve(path_graph(3));
    CHECK(p3.doubled == std::vector<std::int8_t>{2, 0, 2});

    auto c5 = solve(cycle_graph(5));
    CHECK(c5.doubled == std::vector<std::int8_t>{1, 1, 1, 1, 1});

    auto star = solve(star_graph(3));
    CHECK(star.doubled == std::vector<std::int8_t>{0, 2, 2, 2});

    auto single = solve(Graph(1));
    CHECK(single.doubled == std::vector<std::int8_t>{2});
}

TEST_CASE("reachability from the source starts at free left nodes") {
    auto bd = BiDoubleGraph::build(star_graph(3));
    Matching m;
    maximum_matching(bd, m, false, 0);
    for (bool par : {false, true}) {
        auto r = alternating_reachability(bd, m, par);
        // Two leaves stay free on the left, so they and R_center are reachable.
        CHECK(r.from_source[right_node(0)]);
    }
}

TEST_CASE("apply_lp examples") {
    {
        Graph g = star_graph(3);
        Matching m;
        std::vector<ReductionRecord> recs;
        RuleCounters rc;
        auto res = apply_lp(g, m, {}, recs, rc);
        CHECK(res.offset == 3);
        CHECK(g.live_count() == 0);
    }
    {
        Graph g = cycle_graph(5);
        Matching m;
        std::vector<ReductionRecord> recs;
        RuleCounters rc;
        auto res = apply_lp(g, m, {}, recs, rc);
        CHECK(res.removed == 0);
        CHECK(recs.empty());
    }
    {
        Graph g(5);
        Matching m;
        std::vector<ReductionRecord> recs;
        RuleCounters rc;
        auto res = apply_lp(g, m, {}, recs, rc);
        CHECK(res.offset == 5);
    }
}

TEST_CASE("LP solution agrees with the 3^n oracle on random graphs") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + trial % 10;
        Graph g = gnp(n, 0.15 + 0.1 * (trial % 5), rng);
        if (trial % 3 == 0 && n > 2) g.hide(VertexId(trial % n));
        const auto oracle = lp_oracle(g);
        auto bd = BiDoubleGraph::build(g);
        for (bool par : {false, true}) {
            Matching m;
            const auto size = maximum_matching(bd, m, par, trial);
            auto sol = extract_half_integral(bd, m, par);
            CHECK(sol.doubled_objective() == oracle.doubled_objective);
            CHECK(sol.doubled_objective() == 2 * std::int64_t(g.live_count()) - std::int64_t(size));
            CHECK(sol.halves() == oracle.half_set);
            for (VertexId v = 0; v < VertexId(g.id_bound()); ++v) {
                if (!g.alive(v)) continue;
                g.for_each_neighbor(v, [&](VertexId u) { CHECK(sol.doubled[u] + sol.doubled[v] <= 2); });
            }
        }
        Graph h = g;
        Matching m;
        std::vector<ReductionRecord> recs;
        RuleCounters rc;
        const auto res = apply_lp(h, m, {true, std::uint64_t(trial)}, recs, rc);
        CHECK(res.offset + std::int64_t(brute_force_mis(h).size) ==
              std::int64_t(brute_force_mis(g).size));
    }
}

}
