#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fastker/graph.hpp"
#include "fastker/reduction_log.hpp"

namespace fastker {

using IndependentSet = std::vector<VertexId>;

/// Lifts an independent set of the kernel (kernel ids) to the input graph by
/// replaying the log newest first. `vertex_map` maps kernel ids to working ids,
/// which range below `working_ids`. Returns sorted input ids.
IndependentSet undo_all(const ReductionLog& log, std::span<const VertexId> kernel_set,
                        std::span<const VertexId> vertex_map, std::size_t working_ids);

/// Checks that `kernel_set` is independent in `kernel` first (MalformedInput if not).
IndependentSet undo_all(const ReductionLog& log, const Graph& kernel,
                        std::span<const VertexId> kernel_set, std::span<const VertexId> vertex_map,
                        std::size_t working_ids);

/// Same, starting from membership flags over working ids.
IndependentSet undo_all(const ReductionLog& log, std::vector<std::uint8_t> in_set);

/// True if every id is a distinct live vertex of `g` and no two are adjacent.
/// Throws MalformedInput for ids outside the graph.
bool validate_independent(const Graph& g, std::span<const VertexId> s);

}  // namespace fastker
