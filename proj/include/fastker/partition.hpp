#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "fastker/graph.hpp"

namespace fastker {

using BlockId = std::int32_t;

/// Block assignment for every vertex id (hidden ones included).
struct Partition {
    std::vector<BlockId> block_of;
    BlockId k = 1;

    BlockId operator[](VertexId v) const { return block_of[v]; }
    /// Makes room for gadget ids; new entries get block 0 until assigned.
    void reserve(std::size_t total) {
        if (block_of.size() < total) block_of.resize(total, 0);
    }
};

/// b0: live vertex with a live neighbor in another block.
/// b1: live vertex in b0 or adjacent to a live b0 vertex.
struct BoundaryIndex {
    std::vector<std::uint8_t> b0;
    std::vector<std::uint8_t> b1;

    bool boundary(VertexId v) const { return b0[v] != 0; }
    bool near_boundary(VertexId v) const { return b1[v] != 0; }
    void reserve(std::size_t total) {
        if (b0.size() < total) {
            b0.resize(total, 0);
            b1.resize(total, 0);
        }
    }
    bool operator==(const BoundaryIndex&) const = default;
};

struct PartitionOptions {
    double imbalance = 0.1;
    int refinement_rounds = 10;
};

/// Balanced k-way partition of the live vertices: BFS order from pseudo-peripheral
/// seeds cut into k chunks, then size-constrained label propagation.
/// Deterministic in (graph, k, seed).
Partition partition_internal(const Graph& g, BlockId k, std::uint64_t seed,
                             const PartitionOptions& options = {});

/// Reads one block id per line; line i belongs to vertex i.
Partition load_partition(const std::filesystem::path& path, std::size_t n);

BoundaryIndex boundary_sets(const Graph& g, const Partition& p);

/// Brings `index` up to date after the vertices in `touched` changed liveness or
/// adjacency. Returns the vertices whose b0 or b1 flag changed.
std::vector<VertexId> refresh_boundary(const Graph& g, const Partition& p, BoundaryIndex& index,
                                       std::span<const VertexId> touched);

std::size_t cut_edges(const Graph& g, const Partition& p);

}  // namespace fastker
