#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "fastker/graph.hpp"
#include "fastker/partition.hpp"
#include "fastker/reduction_log.hpp"
#include "fastker/reductions.hpp"
#include "fastker/tracking.hpp"

namespace fastker {

enum class KernelMode : std::uint8_t { Quasi, Full };

struct KernelizerConfig {
    int workers = 1;
    /// 0 means one block per worker.
    int blocks = 0;
    bool tracking = true;
    double tracking_threshold = 0.05;
    std::chrono::microseconds sample_interval{10000};
    KernelMode mode = KernelMode::Quasi;
    std::uint64_t seed = 0;
    std::optional<std::filesystem::path> partition_file;
    ReductionConfig reductions;

    /// Throws UsageError when a field is out of range.
    void validate() const;
    int block_count() const { return blocks > 0 ? blocks : workers; }
};

struct PhaseTimes {
    double preprocess = 0.0;
    double partition = 0.0;
    double local = 0.0;
    double lp = 0.0;
    double finish = 0.0;
    double total = 0.0;
};

struct SizeSample {
    double seconds = 0.0;
    std::int64_t live = 0;
};

struct RunStats {
    PhaseTimes times;
    std::vector<SizeSample> size_trace;
    int rounds = 0;
    int tracking_stops = 0;
    std::size_t cut_edges = 0;
    BlockId blocks = 1;
    int workers = 1;
    RuleCounters rules;
    std::int64_t offset = 0;
    std::size_t input_vertices = 0;
    std::size_t input_edges = 0;
    std::size_t preprocessed_vertices = 0;
    std::size_t kernel_vertices = 0;
    std::size_t kernel_edges = 0;
};

struct KernelResult {
    Graph kernel;
    /// kernel id -> working id; ids at or above the input vertex count are gadgets.
    std::vector<VertexId> vertex_map;
    std::int64_t offset = 0;
    ReductionLog log;
    RunStats stats;
    bool is_quasi = true;
    /// Bound on every working id (input vertices and gadgets).
    std::size_t working_ids = 0;
};

/// Preprocessing, partitioning, then rounds of parallel blockwise local reductions
/// (with tracking) and the LP reduction until a round removes nothing. In full mode
/// the result is then reduced to a true kernel sequentially.
KernelResult kernelize(Graph g, const KernelizerConfig& cfg);

/// Same pipeline with one worker and one block.
KernelResult sequential_kernelize(Graph g, KernelizerConfig cfg);

struct FinishStats {
    std::int64_t removed = 0;
    std::int64_t offset = 0;
};

/// Exhaustive sequential application of every enabled rule to the whole graph,
/// alternating with the LP reduction until a full pass changes nothing.
FinishStats finish_full_kernel(Graph& g, Partition& p, ReductionLog& log, RuleCounters& counters,
                               const ReductionConfig& rules, std::uint32_t phase,
                               std::uint64_t seed);

/// True if some enabled rule (local or LP) still fires somewhere on `g`.
bool any_rule_applies(const Graph& g, const ReductionConfig& rules);

}  // namespace fastker
