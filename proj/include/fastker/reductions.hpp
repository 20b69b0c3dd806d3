#pragma once

#include <atomic>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "fastker/graph.hpp"
#include "fastker/partition.hpp"
#include "fastker/reduction_log.hpp"

namespace fastker {

/// Block id meaning "whole graph, no blockwise guards".
inline constexpr BlockId kGlobalBlock = -1;

struct RuleToggles {
    bool degree_two_paths = true;
    bool isolated_clique = true;
    bool fold = true;
    bool twin = true;
    bool unconfined = true;
    bool diamond = true;
    bool linear_program = true;
};

struct ReductionConfig {
    RuleToggles rules;
    /// Largest neighborhood tried by isolated-vertex removal (clique of size cap + 1).
    int isolated_clique_max_degree = 2;
    /// Diamond pairs are only enumerated when |N(S)| stays at or below this.
    int diamond_neighborhood_cap = 64;
    /// Testing hook: sees the graph just before an unconfined vertex is removed, with
    /// the block that ran the test. Only safe to set with a single worker.
    std::function<void(const Graph&, BlockId, VertexId)> on_unconfined;
};

/// Dependency-checking candidate set D: one queue per block plus a membership flag.
/// Each flag and queue is written only by the owner of the block.
class CandidateSet {
public:
    CandidateSet() = default;
    CandidateSet(BlockId blocks, std::size_t capacity);

    void reserve(std::size_t capacity);
    /// Queue slot used for kGlobalBlock.
    static constexpr BlockId queue_of(BlockId block) { return block < 0 ? 0 : block; }

    bool push(BlockId block, VertexId v);
    std::optional<VertexId> pop(BlockId block);
    bool contains(VertexId v) const { return member_[v] != 0; }
    bool empty(BlockId block) const { return queues_[queue_of(block)].empty(); }
    std::size_t size(BlockId block) const { return queues_[queue_of(block)].size(); }
    std::size_t total_size() const;
    BlockId blocks() const { return static_cast<BlockId>(queues_.size()); }

    /// D = every live vertex, grouped by block (single queue when `p` is null).
    void fill(const Graph& g, const Partition* p);
    void clear();

private:
    std::vector<std::deque<VertexId>> queues_;
    std::vector<std::uint8_t> member_;
};

/// Per-thread scratch space sized to the graph capacity.
struct Scratch {
    std::vector<std::uint32_t> in_closed;  // N[S] marker
    std::vector<std::uint32_t> in_set;     // S marker
    std::vector<std::int32_t> hits;        // |N(u) ∩ S|
    std::uint32_t epoch = 0;
    std::vector<VertexId> buffer_a;
    std::vector<VertexId> buffer_b;
    std::vector<VertexId> buffer_c;

    void reserve(std::size_t capacity);
    std::uint32_t next_epoch();
};

/// Progress of a block's unconfined/diamond sweeps, kept across rounds so a phase
/// cut short by tracking resumes instead of starting over.
struct SweepState {
    std::vector<VertexId> queue;
    std::size_t position = 0;
    /// Changed vertices whose surroundings still need a sweep.
    std::vector<VertexId> seeds;
    /// The next sweep covers every member of the block.
    bool full = true;
};

/// Everything a rule needs to act on one block.
struct BlockContext {
    Graph& graph;
    Partition& partition;
    /// null in global mode
    const BoundaryIndex* boundary;
    BlockId block;
    CandidateSet& candidates;
    const ReductionConfig& config;
    Scratch& scratch;
    const std::atomic<bool>* stop = nullptr;

    std::vector<ReductionRecord> records;
    std::int64_t offset = 0;
    RuleCounters counters;
    /// Candidates that belong to other blocks; merged at the next barrier.
    std::vector<VertexId> outbox;
    /// Vertices whose liveness or adjacency changed (boundary refresh input).
    std::vector<VertexId> touched;
    /// Live vertices of this block (gadgets appended); swept by unconfined/diamond.
    std::vector<VertexId> members;
    /// Sweep progress owned by the caller; null means a fresh state per call.
    SweepState* sweep = nullptr;

    bool global() const { return block == kGlobalBlock; }
    bool owns(VertexId v) const { return global() || partition[v] == block; }
    bool is_boundary(VertexId v) const { return boundary != nullptr && boundary->boundary(v); }
    bool stopped() const { return stop != nullptr && stop->load(std::memory_order_relaxed); }

    /// Queues `v` for another attempt (own block) or hands it to its owner.
    void enqueue(VertexId v);
    /// Queues the live neighbors of `v`.
    void enqueue_neighbors(VertexId v);
    /// Hides `v` and queues its live neighbors.
    void remove(VertexId v);
};

// Each rule returns the net number of live vertices it removed (0 if it did not fire).

std::size_t reduce_degree_zero_one(BlockContext& ctx, VertexId v);
std::size_t reduce_isolated_clique(BlockContext& ctx, VertexId v);
std::size_t reduce_fold(BlockContext& ctx, VertexId v);
std::size_t reduce_twin(BlockContext& ctx, VertexId u);

/// S from a failed unconfined test; input to the diamond rule.
struct ConfinementState {
    std::vector<VertexId> set;
    BlockId block = kGlobalBlock;
};

struct ConfinementResult {
    bool unconfined = false;
    ConfinementState state;
};

/// Runs the confinement loop for `v`. With `block != kGlobalBlock`, S and the
/// vertices u chosen from N(S) are restricted to that block.
ConfinementResult test_confinement(const Graph& g, const Partition& p, BlockId block, VertexId v,
                                   Scratch& scratch);

/// Removes `v` if it is unconfined; otherwise fills `state` (when given) and returns 0.
std::size_t reduce_unconfined(BlockContext& ctx, VertexId v, ConfinementState* state = nullptr);

/// True if some nonadjacent u1, u2 in N(S) share N(u)\N(S) = {v1, v2} ⊆ S.
bool diamond_applies(const Graph& g, const Partition& p, const ConfinementState& state,
                     int neighborhood_cap, Scratch& scratch);
std::size_t reduce_diamond(BlockContext& ctx, VertexId v, const ConfinementState& state);

struct BlockStats {
    std::int64_t removed = 0;
    std::int64_t attempts = 0;
    bool interrupted = false;
};

/// Drains D for this block with the cheap rules, then sweeps unconfined/diamond:
/// first over every member, afterwards only within two hops of a change. Repeats
/// until nothing is left to sweep or the stop flag rises.
BlockStats process_block(BlockContext& ctx);

struct PreprocessResult {
    std::int64_t offset = 0;
    std::int64_t removed = 0;
    RuleCounters counters;
};

/// Sequential degree-0/1 and maximal degree-two path reductions over the whole
/// graph, run to exhaustion.
PreprocessResult reduce_degree_two_paths(Graph& g, std::vector<ReductionRecord>& records,
                                         bool use_paths = true);

}  // namespace fastker
