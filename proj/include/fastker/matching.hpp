#pragma once

#include <cstdint>
#include <vector>

#include "fastker/graph.hpp"

namespace fastker {

/// Bipartite double cover of the live graph: left copy L_v and right copy R_v for
/// every vertex, with L_u ~ R_v whenever u ~ v. Indexed by graph ids; hidden
/// vertices have empty rows. Only left rows are stored; for a cover the right
/// rows are identical.
struct BiDoubleGraph {
    std::vector<std::int64_t> offsets;
    std::vector<VertexId> targets;
    /// Left vertices taking part (live graph vertices).
    std::vector<VertexId> live;
    std::size_t right_bound = 0;

    static BiDoubleGraph build(const Graph& g);
    /// Arbitrary bipartite graph with edges (left u, right v), for testing matchings.
    static BiDoubleGraph from_bipartite(std::size_t left, std::size_t right,
                                        const std::vector<Edge>& left_right);

    std::size_t left_bound() const { return offsets.empty() ? 0 : offsets.size() - 1; }
    std::span<const VertexId> row(VertexId v) const {
        return {targets.data() + offsets[v], targets.data() + offsets[v + 1]};
    }
    bool adjacent(VertexId l, VertexId r) const;
};

/// Matching in the double cover, stored by graph id so it survives graph changes.
struct Matching {
    std::vector<VertexId> left;   // L_v -> R_{left[v]}
    std::vector<VertexId> right;  // R_v -> L_{right[v]}

    void reserve(std::size_t left_size, std::size_t right_size);
    std::size_t size() const;
    bool valid(const BiDoubleGraph& bd) const;
};

/// Drops pairs whose endpoints died or are no longer adjacent.
std::size_t reuse_matching(const BiDoubleGraph& bd, Matching& m);

/// Greedy extension: degree-one vertices first, then a seeded random choice.
std::size_t karp_sipser(const BiDoubleGraph& bd, Matching& m, std::uint64_t seed);

/// Rounds of vertex-disjoint augmenting DFS from all free left vertices in
/// parallel, until a round finds nothing. Returns the number of augmentations.
std::size_t augment_parallel(const BiDoubleGraph& bd, Matching& m);

/// Sequential Hopcroft-Karp; the reference implementation.
std::size_t hopcroft_karp(const BiDoubleGraph& bd, Matching& m);

/// Maximum matching: Karp-Sipser start (skipped when `m` already covers all but 5%
/// of the left side), then augmentation.
std::size_t maximum_matching(const BiDoubleGraph& bd, Matching& m, bool parallel,
                             std::uint64_t seed);

}  // namespace fastker
