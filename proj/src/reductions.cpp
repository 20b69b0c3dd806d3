#include "fastker/reductions.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "fastker/errors.hpp"

namespace fastker {

std::string_view rule_name(Rule rule) {
    switch (rule) {
        case Rule::DegreeZero: return "degree_zero";
        case Rule::DegreeOne: return "degree_one";
        case Rule::DegreeTwoPath: return "degree_two_path";
        case Rule::IsolatedClique: return "isolated_clique";
        case Rule::Fold: return "fold";
        case Rule::TwinIncluded: return "twin_included";
        case Rule::TwinFolded: return "twin_folded";
        case Rule::Unconfined: return "unconfined";
        case Rule::Diamond: return "diamond";
        case Rule::LinearProgram: return "linear_program";
    }
    return "unknown";
}

std::int64_t RuleCounters::total() const {
    return std::accumulate(removed.begin(), removed.end(), std::int64_t{0});
}

RuleCounters& RuleCounters::operator+=(const RuleCounters& other) {
    for (std::size_t i = 0; i < kRuleCount; ++i) removed[i] += other.removed[i];
    return *this;
}

std::size_t ReductionLog::record_count() const {
    std::size_t total = 0;
    for (const auto& s : segments) total += s.records.size();
    return total;
}

CandidateSet::CandidateSet(BlockId blocks, std::size_t capacity)
    : queues_(static_cast<std::size_t>(std::max<BlockId>(blocks, 1))), member_(capacity, 0) {}

void CandidateSet::reserve(std::size_t capacity) {
    if (member_.size() < capacity) member_.resize(capacity, 0);
}

bool CandidateSet::push(BlockId block, VertexId v) {
    if (member_[v]) return false;
    member_[v] = 1;
    queues_[queue_of(block)].push_back(v);
    return true;
}

std::optional<VertexId> CandidateSet::pop(BlockId block) {
    auto& q = queues_[queue_of(block)];
    if (q.empty()) return std::nullopt;
    const VertexId v = q.front();
    q.pop_front();
    member_[v] = 0;
    return v;
}

std::size_t CandidateSet::total_size() const {
    std::size_t total = 0;
    for (const auto& q : queues_) total += q.size();
    return total;
}

void CandidateSet::fill(const Graph& g, const Partition* p) {
    clear();
    reserve(g.capacity());
    for (std::size_t i = 0; i < g.id_bound(); ++i) {
        const auto v = static_cast<VertexId>(i);
        if (!g.alive(v)) continue;
        push(p != nullptr ? (*p)[v] : kGlobalBlock, v);
    }
}

void CandidateSet::clear() {
    for (auto& q : queues_) {
        for (VertexId v : q) member_[v] = 0;
        q.clear();
    }
}

void Scratch::reserve(std::size_t capacity) {
    if (in_closed.size() < capacity) {
        in_closed.resize(capacity, 0);
        in_set.resize(capacity, 0);
        hits.resize(capacity, 0);
    }
}

std::uint32_t Scratch::next_epoch() {
    if (++epoch == 0) {
        std::fill(in_closed.begin(), in_closed.end(), 0);
        std::fill(in_set.begin(), in_set.end(), 0);
        epoch = 1;
    }
    return epoch;
}

void BlockContext::enqueue(VertexId v) {
    if (!graph.alive(v)) return;
    if (owns(v)) {
        candidates.push(block, v);
    } else {
        outbox.push_back(v);
    }
}

void BlockContext::enqueue_neighbors(VertexId v) {
    graph.for_each_neighbor(v, [&](VertexId u) { enqueue(u); });
}

void BlockContext::remove(VertexId v) {
    if (!graph.try_hide(v)) {
        throw InvariantViolation("vertex " + std::to_string(v) + " was hidden twice");
    }
    touched.push_back(v);
    enqueue_neighbors(v);
}

namespace {

// Collects up to `limit + 1` live neighbors; returns false if there are more than `limit`.
bool live_neighbors_at_most(const Graph& g, VertexId v, std::size_t limit,
                            std::vector<VertexId>& out) {
    out.clear();
    for (VertexId u : g.entries(v)) {
        if (!g.alive(u)) continue;
        if (out.size() == limit) return false;
        out.push_back(u);
    }
    return true;
}

}  // namespace

std::size_t reduce_degree_zero_one(BlockContext& ctx, VertexId v) {
    auto& g = ctx.graph;
    if (!g.alive(v) || !ctx.owns(v)) return 0;
    auto& nb = ctx.scratch.buffer_a;
    if (!live_neighbors_at_most(g, v, 1, nb)) return 0;
    if (nb.empty()) {
        ctx.records.emplace_back(DegreeZeroRecord{v});
        ctx.remove(v);
        ctx.offset += 1;
        ctx.counters[Rule::DegreeZero] += 1;
        return 1;
    }
    const VertexId u = nb[0];
    // The neighbor is hidden too, which only its owner may do.
    if (!ctx.owns(u)) return 0;
    ctx.records.emplace_back(DegreeOneRecord{v, u});
    ctx.remove(v);
    ctx.remove(u);
    ctx.offset += 1;
    ctx.counters[Rule::DegreeOne] += 2;
    return 2;
}

std::size_t reduce_isolated_clique(BlockContext& ctx, VertexId v) {
    auto& g = ctx.graph;
    if (!g.alive(v) || !ctx.owns(v) || ctx.is_boundary(v)) return 0;
    auto& nb = ctx.scratch.buffer_a;
    const auto cap = static_cast<std::size_t>(std::max(ctx.config.isolated_clique_max_degree, 0));
    if (!live_neighbors_at_most(g, v, cap, nb)) return 0;
    for (VertexId u : nb) {
        if (!ctx.owns(u)) return 0;
    }
    for (std::size_t i = 0; i < nb.size(); ++i) {
        for (std::size_t j = i + 1; j < nb.size(); ++j) {
            if (!g.has_edge(nb[i], nb[j])) return 0;
        }
    }
    std::vector<VertexId> clique(nb.begin(), nb.end());
    ctx.remove(v);
    for (VertexId u : clique) ctx.remove(u);
    ctx.offset += 1;
    const auto removed = clique.size() + 1;
    ctx.counters[Rule::IsolatedClique] += static_cast<std::int64_t>(removed);
    ctx.records.emplace_back(IsolatedCliqueRecord{v, std::move(clique)});
    return removed;
}

std::size_t reduce_fold(BlockContext& ctx, VertexId v) {
    auto& g = ctx.graph;
    if (!g.alive(v) || !ctx.owns(v) || ctx.is_boundary(v)) return 0;
    auto& nb = ctx.scratch.buffer_a;
    if (!live_neighbors_at_most(g, v, 2, nb) || nb.size() != 2) return 0;
    VertexId u = nb[0];
    VertexId w = nb[1];
    if (!ctx.owns(u) || !ctx.owns(w) || g.has_edge(u, w)) return 0;
    const bool bu = ctx.is_boundary(u);
    const bool bw = ctx.is_boundary(w);
    // Both neighbors touch other blocks: the merged vertex would need both identities.
    if (bu && bw) return 0;
    if (bw) std::swap(u, w);
    const VertexId site = (bu || bw) ? u : v;

    auto& fresh = ctx.scratch.buffer_b;
    fresh.clear();
    g.for_each_neighbor(u, [&](VertexId x) {
        if (x != v) fresh.push_back(x);
    });
    g.for_each_neighbor(w, [&](VertexId x) {
        if (x != v) fresh.push_back(x);
    });
    std::sort(fresh.begin(), fresh.end());
    fresh.erase(std::unique(fresh.begin(), fresh.end()), fresh.end());

    if (site == v) {
        ctx.remove(u);
        ctx.remove(w);
    } else {
        ctx.remove(v);
        ctx.remove(w);
    }
    g.rewrite_neighborhood(site, fresh);
    ctx.touched.push_back(site);
    ctx.touched.insert(ctx.touched.end(), fresh.begin(), fresh.end());
    ctx.enqueue(site);
    ctx.enqueue_neighbors(site);

    ctx.records.emplace_back(FoldRecord{v, u, w, site});
    ctx.offset += 1;
    ctx.counters[Rule::Fold] += 2;
    return 2;
}

std::size_t reduce_twin(BlockContext& ctx, VertexId u) {
    auto& g = ctx.graph;
    if (!g.alive(u) || !ctx.owns(u) || ctx.is_boundary(u)) return 0;
    auto& nb = ctx.scratch.buffer_a;
    if (!live_neighbors_at_most(g, u, 3, nb) || nb.size() != 3) return 0;
    for (VertexId x : nb) {
        if (!ctx.owns(x)) return 0;
    }
    std::array<VertexId, 3> hood{nb[0], nb[1], nb[2]};
    std::sort(hood.begin(), hood.end());

    VertexId pivot = hood[0];
    for (VertexId x : hood) {
        if (g.degree(x) < g.degree(pivot)) pivot = x;
    }
    VertexId twin = kNoVertex;
    auto& other = ctx.scratch.buffer_b;
    for (VertexId y : g.entries(pivot)) {
        if (y == u || !g.alive(y) || !ctx.owns(y) || g.degree(y) != 3) continue;
        if (!live_neighbors_at_most(g, y, 3, other) || other.size() != 3) continue;
        std::sort(other.begin(), other.end());
        if (std::equal(other.begin(), other.end(), hood.begin())) {
            twin = y;
            break;
        }
    }
    if (twin == kNoVertex) return 0;

    const bool has_inner_edge = g.has_edge(hood[0], hood[1]) || g.has_edge(hood[0], hood[2]) ||
                                g.has_edge(hood[1], hood[2]);
    if (has_inner_edge) {
        ctx.remove(u);
        ctx.remove(twin);
        for (VertexId x : hood) ctx.remove(x);
        ctx.records.emplace_back(TwinIncludedRecord{u, twin, hood});
        ctx.offset += 2;
        ctx.counters[Rule::TwinIncluded] += 5;
        return 5;
    }

    // The gadget takes over N(N(u)) \ {u, twin}; all of it must be ours.
    for (VertexId x : hood) {
        if (ctx.is_boundary(x)) return 0;
    }
    auto& outer = ctx.scratch.buffer_c;
    outer.clear();
    for (VertexId x : hood) {
        g.for_each_neighbor(x, [&](VertexId y) {
            if (y != u && y != twin) outer.push_back(y);
        });
    }
    std::sort(outer.begin(), outer.end());
    outer.erase(std::unique(outer.begin(), outer.end()), outer.end());
    for (VertexId y : outer) {
        if (!ctx.owns(y)) return 0;
    }

    if (g.id_bound() >= g.capacity() && !ctx.global()) {
        throw InvariantViolation("gadget capacity exhausted during a parallel phase");
    }
    const std::array<VertexId, 5> hidden{u, twin, hood[0], hood[1], hood[2]};
    const VertexId gadget = g.replace_with_gadget(hidden, outer);
    ctx.touched.insert(ctx.touched.end(), hidden.begin(), hidden.end());
    if (static_cast<std::size_t>(gadget) >= ctx.partition.block_of.size()) {
        if (!ctx.global()) throw InvariantViolation("partition not reserved for gadget ids");
        ctx.partition.reserve(g.capacity());
    }
    ctx.partition.block_of[gadget] = ctx.global() ? ctx.partition[u] : ctx.block;
    ctx.candidates.reserve(g.capacity());
    ctx.scratch.reserve(g.capacity());
    ctx.members.push_back(gadget);
    ctx.touched.push_back(gadget);
    ctx.touched.insert(ctx.touched.end(), outer.begin(), outer.end());
    ctx.enqueue(gadget);
    ctx.enqueue_neighbors(gadget);

    ctx.records.emplace_back(TwinFoldedRecord{u, twin, hood, gadget});
    ctx.offset += 2;
    ctx.counters[Rule::TwinFolded] += 4;
    return 4;
}

ConfinementResult test_confinement(const Graph& g, const Partition& p, BlockId block, VertexId v,
                                   Scratch& s) {
    auto owns = [&](VertexId x) { return block == kGlobalBlock || p[x] == block; };
    s.reserve(g.capacity());
    const std::uint32_t e = s.next_epoch();
    ConfinementResult result;
    result.state.block = block;
    auto& set = result.state.set;
    set.push_back(v);
    s.in_set[v] = e;
    s.in_closed[v] = e;
    std::vector<VertexId> hood;
    g.for_each_neighbor(v, [&](VertexId u) {
        s.in_closed[u] = e;
        s.hits[u] = 1;
        hood.push_back(u);
    });

    while (true) {
        VertexId best_u = kNoVertex;
        VertexId best_w = kNoVertex;
        bool best_owned = false;
        for (VertexId u : hood) {
            if (!owns(u) || s.hits[u] != 1 || !g.alive(u)) continue;
            VertexId outside = kNoVertex;
            int count = 0;
            for (VertexId x : g.entries(u)) {
                if (!g.alive(x) || s.in_closed[x] == e) continue;
                outside = x;
                if (++count > 1) break;
            }
            if (count == 0) {
                result.unconfined = true;
                return result;
            }
            if (count == 1) {
                const bool w_owned = owns(outside);
                const bool better = best_u == kNoVertex || (w_owned && !best_owned) ||
                                    (w_owned == best_owned && u < best_u);
                if (better) {
                    best_u = u;
                    best_w = outside;
                    best_owned = w_owned;
                }
            }
        }
        // The singleton w has to join S; outside our block we cannot follow it.
        if (best_u == kNoVertex || !best_owned) return result;

        set.push_back(best_w);
        s.in_set[best_w] = e;
        s.in_closed[best_w] = e;
        g.for_each_neighbor(best_w, [&](VertexId y) {
            if (s.in_closed[y] != e) {
                s.in_closed[y] = e;
                s.hits[y] = 1;
                hood.push_back(y);
            } else if (s.in_set[y] != e) {
                ++s.hits[y];
            }
        });
    }
}

std::size_t reduce_unconfined(BlockContext& ctx, VertexId v, ConfinementState* state) {
    auto& g = ctx.graph;
    if (!g.alive(v) || !ctx.owns(v)) return 0;
    auto result = test_confinement(g, ctx.partition, ctx.block, v, ctx.scratch);
    if (!result.unconfined) {
        if (state != nullptr) *state = std::move(result.state);
        return 0;
    }
    if (ctx.config.on_unconfined) ctx.config.on_unconfined(g, ctx.block, v);
    ctx.records.emplace_back(UnconfinedRecord{v});
    ctx.remove(v);
    ctx.counters[Rule::Unconfined] += 1;
    return 1;
}

bool diamond_applies(const Graph& g, const Partition& p, const ConfinementState& state,
                     int neighborhood_cap, Scratch& s) {
    const BlockId block = state.block;
    auto owns = [&](VertexId x) { return block == kGlobalBlock || p[x] == block; };
    s.reserve(g.capacity());
    const std::uint32_t e = s.next_epoch();
    for (VertexId x : state.set) {
        s.in_set[x] = e;
        s.in_closed[x] = e;
    }
    std::vector<VertexId> hood;
    for (VertexId x : state.set) {
        for (VertexId y : g.entries(x)) {
            if (!g.alive(y)) continue;
            if (s.in_closed[y] != e) {
                s.in_closed[y] = e;
                s.hits[y] = 1;
                hood.push_back(y);
            } else if (s.in_set[y] != e) {
                ++s.hits[y];
            }
        }
    }
    if (hood.size() > static_cast<std::size_t>(std::max(neighborhood_cap, 0))) return false;

    struct Candidate {
        VertexId u;
        VertexId first;
        VertexId second;
    };
    std::vector<Candidate> candidates;
    for (VertexId u : hood) {
        if (!owns(u) || s.hits[u] != 2) continue;
        VertexId pair[2] = {kNoVertex, kNoVertex};
        int in_set = 0;
        bool escapes = false;
        for (VertexId x : g.entries(u)) {
            if (!g.alive(x)) continue;
            if (s.in_closed[x] != e) {
                escapes = true;
                break;
            }
            if (s.in_set[x] == e && in_set < 2) pair[in_set++] = x;
        }
        if (escapes || in_set != 2) continue;
        candidates.push_back({u, std::min(pair[0], pair[1]), std::max(pair[0], pair[1])});
    }
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        for (std::size_t j = i + 1; j < candidates.size(); ++j) {
            const auto& a = candidates[i];
            const auto& b = candidates[j];
            if (a.first == b.first && a.second == b.second && !g.has_edge(a.u, b.u)) return true;
        }
    }
    return false;
}

std::size_t reduce_diamond(BlockContext& ctx, VertexId v, const ConfinementState& state) {
    auto& g = ctx.graph;
    if (!g.alive(v) || !ctx.owns(v) || state.set.empty() || state.set.front() != v) return 0;
    if (!diamond_applies(g, ctx.partition, state, ctx.config.diamond_neighborhood_cap,
                         ctx.scratch)) {
        return 0;
    }
    ctx.records.emplace_back(DiamondRecord{v});
    ctx.remove(v);
    ctx.counters[Rule::Diamond] += 1;
    return 1;
}

namespace {

// Live vertices of the block within two hops of any seed.
void collect_near(BlockContext& ctx, std::span<const VertexId> seeds, std::vector<VertexId>& out) {
    const auto& g = ctx.graph;
    out.clear();
    const std::uint32_t e = ctx.scratch.next_epoch();
    auto mark = [&](VertexId x) {
        if (ctx.scratch.in_closed[x] == e || !g.alive(x) || !ctx.owns(x)) return;
        ctx.scratch.in_closed[x] = e;
        out.push_back(x);
    };
    for (VertexId t : seeds) {
        mark(t);
        for (VertexId a : g.entries(t)) {
            if (!g.alive(a)) continue;
            mark(a);
            g.for_each_neighbor(a, mark);
        }
    }
}

}  // namespace

BlockStats process_block(BlockContext& ctx) {
    BlockStats stats;
    auto& g = ctx.graph;
    const auto& rules = ctx.config.rules;
    ctx.scratch.reserve(g.capacity());
    ConfinementState state;
    SweepState local;
    SweepState& sw = ctx.sweep != nullptr ? *ctx.sweep : local;
    std::size_t since = ctx.touched.size();

    while (true) {
        while (true) {
            if (ctx.stopped()) {
                stats.interrupted = true;
                return stats;
            }
            const auto next = ctx.candidates.pop(ctx.block);
            if (!next) break;
            const VertexId v = *next;
            if (!g.alive(v) || !ctx.owns(v)) continue;
            if (g.dead_fraction(v) > 0.5) g.cleanup(v);
            ++stats.attempts;
            std::size_t got = reduce_degree_zero_one(ctx, v);
            if (got == 0 && rules.isolated_clique) got = reduce_isolated_clique(ctx, v);
            if (got == 0 && rules.fold) got = reduce_fold(ctx, v);
            if (got == 0 && rules.twin) got = reduce_twin(ctx, v);
            stats.removed += static_cast<std::int64_t>(got);
        }
        if (!rules.unconfined && !rules.diamond) break;

        sw.seeds.insert(sw.seeds.end(), ctx.touched.begin() + static_cast<std::ptrdiff_t>(since),
                        ctx.touched.end());
        since = ctx.touched.size();
        if (sw.position >= sw.queue.size()) {
            if (sw.full) {
                std::erase_if(ctx.members, [&](VertexId v) { return !g.alive(v); });
                sw.queue = ctx.members;
                sw.full = false;
            } else if (!sw.seeds.empty()) {
                collect_near(ctx, sw.seeds, sw.queue);
            } else {
                break;
            }
            sw.seeds.clear();
            sw.position = 0;
        }

        while (sw.position < sw.queue.size()) {
            if (ctx.stopped()) {
                stats.interrupted = true;
                return stats;
            }
            const VertexId v = sw.queue[sw.position++];
            if (!g.alive(v) || !ctx.owns(v)) continue;
            ++stats.attempts;
            std::size_t got = 0;
            state.set.clear();
            if (rules.unconfined) {
                got = reduce_unconfined(ctx, v, rules.diamond ? &state : nullptr);
            } else {
                auto result = test_confinement(g, ctx.partition, ctx.block, v, ctx.scratch);
                if (!result.unconfined) state = std::move(result.state);
            }
            if (got == 0 && rules.diamond && !state.set.empty()) {
                got = reduce_diamond(ctx, v, state);
            }
            stats.removed += static_cast<std::int64_t>(got);
        }
    }
    return stats;
}

}  // namespace fastker
