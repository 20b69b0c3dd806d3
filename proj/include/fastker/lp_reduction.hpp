#pragma once

#include <cstdint>
#include <vector>

#include "fastker/graph.hpp"
#include "fastker/matching.hpp"
#include "fastker/reduction_log.hpp"

namespace fastker {

/// Residual-graph node ids: L_v = 2v, R_v = 2v + 1.
constexpr std::int64_t left_node(VertexId v) { return 2 * static_cast<std::int64_t>(v); }
constexpr std::int64_t right_node(VertexId v) { return 2 * static_cast<std::int64_t>(v) + 1; }

/// Nodes reachable from the source and nodes that reach the sink in the residual
/// network of a maximum matching of the double cover.
struct Reachability {
    std::vector<std::uint8_t> from_source;
    std::vector<std::uint8_t> to_sink;
};

Reachability alternating_reachability(const BiDoubleGraph& bd, const Matching& m, bool parallel);

/// Doubled LP values: 0, 1 (meaning 1/2) or 2 per vertex; -1 for hidden ids.
struct HalfIntegralSolution {
    std::vector<std::int8_t> doubled;

    std::int64_t doubled_objective() const;
    std::vector<VertexId> ones() const;
    std::vector<VertexId> zeros() const;
    std::vector<VertexId> halves() const;
};

/// Optimal half-integral solution of the MIS LP relaxation whose 1/2-part is
/// minimal. `m` must be a maximum matching of `bd`.
HalfIntegralSolution extract_half_integral(const BiDoubleGraph& bd, const Matching& m,
                                           bool parallel);

struct LpOptions {
    bool parallel = true;
    std::uint64_t seed = 1;
};

struct LpStepResult {
    std::int64_t removed = 0;
    std::int64_t offset = 0;
    std::size_t matching_size = 0;
};

/// One LP reduction: maximum matching (reusing `matching`), minimal solution, then
/// commits the 1-vertices and drops the 0-vertices. Appends one record if anything fired.
LpStepResult apply_lp(Graph& g, Matching& matching, const LpOptions& options,
                      std::vector<ReductionRecord>& records, RuleCounters& counters);

}  // namespace fastker
