#include "fastker/kernelizer.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <memory>
#include <mutex>

#include <omp.h>

#include "fastker/errors.hpp"
#include "fastker/lp_reduction.hpp"
#include "fastker/matching.hpp"

namespace fastker {

void KernelizerConfig::validate() const {
    if (workers < 1) throw UsageError("workers must be at least 1");
    if (blocks < 0) throw UsageError("blocks must be non-negative");
    if (!(tracking_threshold > 0.0 && tracking_threshold < 1.0)) {
        throw UsageError("tracking threshold must lie strictly between 0 and 1");
    }
    if (sample_interval.count() <= 0) throw UsageError("sample interval must be positive");
    if (reductions.isolated_clique_max_degree < 0) {
        throw UsageError("isolated clique cap must be non-negative");
    }
    if (reductions.diamond_neighborhood_cap < 0) {
        throw UsageError("diamond neighborhood cap must be non-negative");
    }
}

namespace {

using Clock = std::chrono::steady_clock;

class ThreadCountGuard {
public:
    explicit ThreadCountGuard(int threads) : previous_(omp_get_max_threads()) {
        omp_set_num_threads(threads);
    }
    ~ThreadCountGuard() { omp_set_num_threads(previous_); }
    ThreadCountGuard(const ThreadCountGuard&) = delete;
    ThreadCountGuard& operator=(const ThreadCountGuard&) = delete;

private:
    int previous_;
};

// Twin folds are the only rule that adds vertices, and each one lowers the live
// count by four, so n/4 extra ids always suffice.
std::size_t working_capacity(std::size_t n) { return n + n / 4 + 64; }

void push_closed_neighborhood(const Graph& g, const Partition& p, CandidateSet& d, VertexId v) {
    if (g.alive(v)) d.push(p[v], v);
    g.for_each_neighbor(v, [&](VertexId u) { d.push(p[u], u); });
}

struct BlockOutput {
    std::vector<VertexId> members;
    std::vector<ReductionRecord> records;
    std::vector<VertexId> outbox;
    std::vector<VertexId> touched;
    std::int64_t offset = 0;
    RuleCounters counters;
    SweepState sweep;
};

}  // namespace

FinishStats finish_full_kernel(Graph& g, Partition& p, ReductionLog& log, RuleCounters& counters,
                               const ReductionConfig& rules, std::uint32_t phase,
                               std::uint64_t seed) {
    FinishStats out;
    p.reserve(g.capacity());
    CandidateSet d(1, g.capacity());
    Scratch scratch;
    scratch.reserve(g.capacity());
    Matching matching;
    std::vector<VertexId> members;
    while (true) {
        const auto before = static_cast<std::int64_t>(g.live_count());
        d.fill(g, nullptr);
        members.clear();
        for (std::size_t v = 0; v < g.id_bound(); ++v) {
            if (g.alive(static_cast<VertexId>(v))) members.push_back(static_cast<VertexId>(v));
        }
        BlockContext ctx{g, p, nullptr, kGlobalBlock, d, rules, scratch, nullptr};
        ctx.members = std::move(members);
        process_block(ctx);
        members = std::move(ctx.members);
        out.offset += ctx.offset;
        counters += ctx.counters;
        log.append(LogSegment{phase++, kGlobalBlock, std::move(ctx.records)});

        if (rules.rules.linear_program) {
            LogSegment lp{phase++, kGlobalBlock, {}};
            const auto step = apply_lp(g, matching, LpOptions{false, seed}, lp.records, counters);
            out.offset += step.offset;
            log.append(std::move(lp));
        }
        const auto after = static_cast<std::int64_t>(g.live_count());
        out.removed += before - after;
        if (after == before) break;
    }
    return out;
}

KernelResult kernelize(Graph g, const KernelizerConfig& cfg) {
    cfg.validate();
    ThreadCountGuard threads(cfg.workers);
    const auto run_start = Clock::now();
    KernelResult result;
    RunStats& stats = result.stats;
    stats.workers = cfg.workers;
    stats.input_vertices = g.id_bound();
    stats.input_edges = g.live_edge_count();
    result.log.input_vertex_count = g.id_bound();

    const std::size_t n = g.id_bound();
    const std::size_t capacity = working_capacity(n);
    g.reserve(capacity);
    std::uint32_t phase = 0;
    std::int64_t offset = 0;
    RuleCounters& counters = stats.rules;
    const RuleToggles& toggles = cfg.reductions.rules;

    // Sequential preprocessing over the whole graph.
    {
        const auto t = Clock::now();
        LogSegment seg{phase++, kGlobalBlock, {}};
        const auto pre = reduce_degree_two_paths(g, seg.records, toggles.degree_two_paths);
        offset += pre.offset;
        counters += pre.counters;
        result.log.append(std::move(seg));
        stats.preprocessed_vertices = g.live_count();
        stats.times.preprocess = seconds_since(t);
    }

    // The preprocessed graph is partitioned in place; ids stay those of the input.
    Partition p;
    {
        const auto t = Clock::now();
        p = cfg.partition_file ? load_partition(*cfg.partition_file, n)
                               : partition_internal(g, cfg.block_count(), cfg.seed);
        stats.cut_edges = cut_edges(g, p);
        stats.times.partition = seconds_since(t);
    }
    p.reserve(capacity);
    stats.blocks = p.k;
    BoundaryIndex boundary = boundary_sets(g, p);
    boundary.reserve(capacity);
    CandidateSet d(p.k, capacity);
    d.fill(g, &p);

    std::vector<BlockOutput> blocks(static_cast<std::size_t>(p.k));
    for (std::size_t v = 0; v < n; ++v) {
        if (g.alive(static_cast<VertexId>(v))) blocks[p[static_cast<VertexId>(v)]].members.push_back(static_cast<VertexId>(v));
    }
    std::vector<Scratch> scratch(static_cast<std::size_t>(cfg.workers));
    for (auto& s : scratch) s.reserve(capacity);

    Matching matching;
    StopSignal stop;
    ReductionTracker tracker(cfg.tracking_threshold);
    const bool parallel = cfg.workers > 1;
    const std::size_t max_rounds = n + 2;
    // A round that removed nothing is followed by one more with full sweeps; only
    // when that one is quiet too has every block reached its fixpoint.
    bool verifying = false;

    // Hands a changed vertex to every block that owns something within two hops.
    std::vector<std::uint8_t> block_seen(static_cast<std::size_t>(p.k), 0);
    std::vector<BlockId> seen_list;
    auto seed_sweeps = [&](VertexId t) {
        if (p.k == 1 || !boundary.near_boundary(t)) {
            blocks[static_cast<std::size_t>(p[t])].sweep.seeds.push_back(t);
            return;
        }
        auto add = [&](VertexId x) {
            const auto b = static_cast<std::size_t>(p[x]);
            if (!block_seen[b]) {
                block_seen[b] = 1;
                seen_list.push_back(p[x]);
            }
        };
        add(t);
        for (VertexId a : g.entries(t)) {
            if (!g.alive(a)) continue;
            add(a);
            g.for_each_neighbor(a, add);
        }
        for (BlockId b : seen_list) {
            blocks[static_cast<std::size_t>(b)].sweep.seeds.push_back(t);
            block_seen[static_cast<std::size_t>(b)] = 0;
        }
        seen_list.clear();
    };

    while (true) {
        const auto live_before = static_cast<std::int64_t>(g.live_count());
        ++stats.rounds;
        if (static_cast<std::size_t>(stats.rounds) > max_rounds) {
            throw InvariantViolation("kernelization did not converge");
        }

        // Local phase.
        const auto local_start = Clock::now();
        stop.reset();
        tracker.start(0.0, 0);
        auto removed_so_far = [&] {
            return live_before - static_cast<std::int64_t>(g.live_count());
        };
        std::unique_ptr<TrackingMonitor> monitor;
        if (cfg.tracking && !parallel) {
            monitor = std::make_unique<TrackingMonitor>(tracker, removed_so_far, stop,
                                                        cfg.sample_interval, local_start);
        }
        std::atomic<int> unfinished{p.k};
        std::atomic<bool> sampler_taken{false};
        std::exception_ptr failure;
        std::mutex failure_lock;
        const auto block_count = static_cast<std::int64_t>(p.k);

#pragma omp parallel num_threads(cfg.workers)
        {
            Scratch& mine = scratch[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(dynamic, 1) nowait
            for (std::int64_t b = 0; b < block_count; ++b) {
                try {
                    auto& out = blocks[static_cast<std::size_t>(b)];
                    BlockContext ctx{g, p, &boundary, static_cast<BlockId>(b), d, cfg.reductions,
                                     mine, &stop.flag()};
                    ctx.members = std::move(out.members);
                    ctx.sweep = &out.sweep;
                    process_block(ctx);
                    out.members = std::move(ctx.members);
                    out.records = std::move(ctx.records);
                    out.outbox = std::move(ctx.outbox);
                    out.touched = std::move(ctx.touched);
                    out.offset = ctx.offset;
                    out.counters = ctx.counters;
                } catch (...) {
                    std::lock_guard lock(failure_lock);
                    if (!failure) failure = std::current_exception();
                    stop.raise(StopReason::External);
                }
                unfinished.fetch_sub(1, std::memory_order_acq_rel);
            }
            if (cfg.tracking && parallel && !sampler_taken.exchange(true)) {
                run_sampler(
                    tracker, removed_so_far, stop, cfg.sample_interval,
                    [&] { return unfinished.load(std::memory_order_acquire) > 0; }, local_start);
            }
        }
        if (monitor) monitor->finish();
        if (failure) std::rethrow_exception(failure);
        if (stop.reason() == StopReason::Tracking) ++stats.tracking_stops;
        const double phase_offset = std::chrono::duration<double>(local_start - run_start).count();
        for (const auto& s : tracker.samples()) {
            stats.size_trace.push_back({phase_offset + s.seconds, live_before - s.removed});
        }

        std::vector<VertexId> touched;
        for (BlockId b = 0; b < p.k; ++b) {
            auto& out = blocks[static_cast<std::size_t>(b)];
            offset += out.offset;
            counters += out.counters;
            result.log.append(LogSegment{phase, b, std::move(out.records)});
            out.records.clear();
            out.offset = 0;
            out.counters = RuleCounters{};
            for (VertexId v : out.outbox) {
                if (g.alive(v)) d.push(p[v], v);
            }
            out.outbox.clear();
            touched.insert(touched.end(), out.touched.begin(), out.touched.end());
            out.touched.clear();
        }
        // A block already took its own changes into account; its neighbors have not.
        if (p.k > 1) {
            for (VertexId t : touched) seed_sweeps(t);
        }
        ++phase;
        stats.times.local += seconds_since(local_start);

        // LP phase.
        if (toggles.linear_program) {
            const auto lp_start = Clock::now();
            LogSegment seg{phase++, kGlobalBlock, {}};
            const auto step =
                // Augmenting-path rounds beat Hopcroft-Karp on warm matchings even on
                // one thread, so the sequential pipeline uses them too.
                apply_lp(g, matching, LpOptions{true, cfg.seed}, seg.records, counters);
            offset += step.offset;
            if (!seg.records.empty()) {
                const auto& rec = std::get<LpRecord>(seg.records.back());
                for (const auto* side : {&rec.ones, &rec.zeros}) {
                    for (VertexId v : *side) {
                        touched.push_back(v);
                        seed_sweeps(v);
                        g.for_each_neighbor(v, [&](VertexId u) { d.push(p[u], u); });
                    }
                }
            }
            result.log.append(std::move(seg));
            stats.times.lp += seconds_since(lp_start);
        }

        // Barrier: boundary flags catch up with this round's changes.
        for (VertexId v : refresh_boundary(g, p, boundary, touched)) {
            push_closed_neighborhood(g, p, d, v);
            seed_sweeps(v);
        }
        for (auto& out : blocks) {
            std::erase_if(out.members, [&](VertexId v) { return !g.alive(v); });
        }

        if (static_cast<std::int64_t>(g.live_count()) != live_before) {
            verifying = false;
        } else if (verifying || !(toggles.unconfined || toggles.diamond)) {
            break;
        } else {
            verifying = true;
            for (auto& out : blocks) out.sweep.full = true;
        }
    }

    result.is_quasi = true;
    if (cfg.mode == KernelMode::Full) {
        const auto t = Clock::now();
        const auto fin =
            finish_full_kernel(g, p, result.log, counters, cfg.reductions, phase, cfg.seed);
        offset += fin.offset;
        result.is_quasi = false;
        stats.times.finish = seconds_since(t);
    }

    result.working_ids = g.id_bound();
    auto compacted = g.compact();
    result.kernel = std::move(compacted.graph);
    result.vertex_map = std::move(compacted.old_of_new);
    result.offset = offset;
    stats.offset = offset;
    stats.kernel_vertices = result.kernel.live_count();
    stats.kernel_edges = result.kernel.live_edge_count();
    stats.times.total = seconds_since(run_start);
    if (counters.total() != static_cast<std::int64_t>(stats.input_vertices) -
                                static_cast<std::int64_t>(stats.kernel_vertices)) {
        throw InvariantViolation("per-rule removal counts do not add up to the size change");
    }
    return result;
}

KernelResult sequential_kernelize(Graph g, KernelizerConfig cfg) {
    cfg.workers = 1;
    cfg.blocks = 1;
    cfg.partition_file.reset();
    return kernelize(std::move(g), cfg);
}

bool any_rule_applies(const Graph& original, const ReductionConfig& rules) {
    const auto& t = rules.rules;
    for (std::size_t i = 0; i < original.id_bound(); ++i) {
        const auto v = static_cast<VertexId>(i);
        if (!original.alive(v)) continue;
        Graph g = original;
        g.reserve(g.id_bound() + 1);
        Partition p;
        p.block_of.assign(g.capacity(), 0);
        CandidateSet d(1, g.capacity());
        Scratch scratch;
        scratch.reserve(g.capacity());
        BlockContext ctx{g, p, nullptr, kGlobalBlock, d, rules, scratch, nullptr};
        if (reduce_degree_zero_one(ctx, v) > 0) return true;
        if (t.isolated_clique && reduce_isolated_clique(ctx, v) > 0) return true;
        if (t.fold && reduce_fold(ctx, v) > 0) return true;
        if (t.twin && reduce_twin(ctx, v) > 0) return true;
        if (t.unconfined || t.diamond) {
            auto conf = test_confinement(g, p, kGlobalBlock, v, scratch);
            if (conf.unconfined && t.unconfined) return true;
            if (!conf.unconfined && t.diamond &&
                diamond_applies(g, p, conf.state, rules.diamond_neighborhood_cap, scratch)) {
                return true;
            }
        }
    }
    if (t.linear_program && original.live_count() > 0) {
        const BiDoubleGraph bd = BiDoubleGraph::build(original);
        Matching m;
        maximum_matching(bd, m, false, 1);
        const auto sol = extract_half_integral(bd, m, false);
        for (VertexId v : bd.live) {
            if (sol.doubled[v] != 1) return true;
        }
    }
    return false;
}

}  // namespace fastker
