#pragma once

#include <cstdint>
#include <vector>

#include "fastker/graph.hpp"

namespace fastker {

struct OracleResult {
    std::size_t size = 0;
    /// One maximum independent set, as graph ids.
    std::vector<VertexId> set;
};

inline constexpr std::size_t kBruteForceLimit = 40;

/// Exact MIS of the live graph by branch and bound; refuses more than `limit` vertices.
OracleResult brute_force_mis(const Graph& g, std::size_t limit = kBruteForceLimit);

/// Plain subset enumeration (n <= 20); checks the branch and bound.
std::size_t mis_by_enumeration(const Graph& g);

struct LpOracleResult {
    /// Twice the optimum of the MIS LP relaxation.
    std::int64_t doubled_objective = 0;
    /// Vertices at 1/2 in every optimal half-integral solution.
    std::vector<VertexId> half_set;
    /// Vertices at 1 (resp. 0) in every optimal half-integral solution.
    std::vector<VertexId> forced_ones;
    std::vector<VertexId> forced_zeros;
};

/// Enumerates all 3^n half-integral assignments of the live graph (n <= 12).
LpOracleResult lp_oracle(const Graph& g);

}  // namespace fastker
