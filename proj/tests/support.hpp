#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "fastker/generators.hpp"
#include "fastker/graph.hpp"
#include "fastker/kernelizer.hpp"
#include "fastker/oracle.hpp"
#include "fastker/reductions.hpp"
#include "fastker/restore.hpp"

namespace fastker::testing {

inline Graph graph_of(std::size_t n, std::initializer_list<std::pair<int, int>> edges) {
    std::vector<Edge> list;
    for (auto [u, v] : edges) list.push_back({u, v});
    return Graph::from_edges(n, list);
}

inline Graph path_graph(std::size_t n) {
    std::vector<Edge> e;
    for (std::size_t i = 0; i + 1 < n; ++i) e.push_back({VertexId(i), VertexId(i + 1)});
    return Graph::from_edges(n, e);
}

inline Graph cycle_graph(std::size_t n) {
    std::vector<Edge> e;
    for (std::size_t i = 0; i < n; ++i) e.push_back({VertexId(i), VertexId((i + 1) % n)});
    return Graph::from_edges(n, e);
}

inline Graph complete_graph(std::size_t n) {
    std::vector<Edge> e;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) e.push_back({VertexId(i), VertexId(j)});
    return Graph::from_edges(n, e);
}

inline Graph star_graph(std::size_t leaves) {
    std::vector<Edge> e;
    for (std::size_t i = 1; i <= leaves; ++i) e.push_back({0, VertexId(i)});
    return Graph::from_edges(leaves + 1, e);
}

inline Graph petersen_graph() {
    std::vector<Edge> e;
    for (int i = 0; i < 5; ++i) {
        e.push_back({i, (i + 1) % 5});
        e.push_back({i, i + 5});
        e.push_back({5 + i, 5 + (i + 2) % 5});
    }
    return Graph::from_edges(10, e);
}

inline Graph gnp(std::size_t n, double p, std::mt19937_64& rng) { return random_gnp(n, p, rng); }

/// Disjoint union; the vertices of `b` follow those of `a`.
inline Graph disjoint_union(const Graph& a, const Graph& b) {
    std::vector<Edge> e;
    const auto shift = static_cast<VertexId>(a.id_bound());
    for (std::size_t v = 0; v < a.id_bound(); ++v)
        a.for_each_neighbor(VertexId(v), [&](VertexId u) {
            if (u > VertexId(v)) e.push_back({VertexId(v), u});
        });
    for (std::size_t v = 0; v < b.id_bound(); ++v)
        b.for_each_neighbor(VertexId(v), [&](VertexId u) {
            if (u > VertexId(v)) e.push_back({VertexId(v) + shift, u + shift});
        });
    return Graph::from_edges(a.id_bound() + b.id_bound(), e);
}

/// Lifts brute_force_mis(kernel) to the input and checks it. Returns the lifted
/// size, or -1 when the lifted set is not independent or not offset + MIS(kernel).
inline std::int64_t lifted_mis_size(const Graph& input, const KernelResult& r) {
    const auto k = brute_force_mis(r.kernel);
    const auto lifted = undo_all(r.log, r.kernel, k.set, r.vertex_map, r.working_ids);
    if (!validate_independent(input, lifted)) return -1;
    if (static_cast<std::int64_t>(lifted.size()) != r.offset + std::int64_t(k.size)) return -1;
    return static_cast<std::int64_t>(lifted.size());
}

/// Global context over a whole graph, for driving single rules by hand.
struct GlobalHarness {
    Graph& g;
    Partition p;
    CandidateSet d;
    Scratch scratch;
    ReductionConfig config;
    BlockContext ctx;

    explicit GlobalHarness(Graph& graph, ReductionConfig cfg = {})
        : g(graph), p(), d(1, graph.capacity() + 64), config(cfg),
          ctx{g, p, nullptr, kGlobalBlock, d, config, scratch, nullptr} {
        g.reserve(g.id_bound() + g.id_bound() / 4 + 64);
        p.block_of.assign(g.capacity(), 0);
        d.reserve(g.capacity());
        scratch.reserve(g.capacity());
    }
};

/// Undo of a single segment of records, starting from an MIS of what is left.
inline std::vector<VertexId> undo_records(const Graph& after, std::vector<ReductionRecord> records,
                                          std::size_t input_vertices) {
    const auto k = brute_force_mis(after);
    ReductionLog log;
    log.input_vertex_count = input_vertices;
    log.append(LogSegment{0, kGlobalBlock, std::move(records)});
    std::vector<std::uint8_t> in(after.id_bound(), 0);
    for (VertexId v : k.set) in[v] = 1;
    return undo_all(log, std::move(in));
}

}  // namespace fastker::testing
