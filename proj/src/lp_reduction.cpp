#include "fastker/lp_reduction.hpp"

#include <algorithm>
#include <atomic>
#include <string>

#include <omp.h>

#include "fastker/errors.hpp"

namespace fastker {

namespace {

// Marks every node reachable from `seeds` through `expand(node, emit)`.
template <class Expand>
std::vector<std::uint8_t> mark_reachable(std::size_t node_count, std::vector<std::int64_t> seeds,
                                         Expand expand, bool parallel) {
    std::vector<std::uint8_t> mark(node_count, 0);
    std::vector<std::int64_t> frontier;
    for (std::int64_t x : seeds) {
        if (!mark[x]) {
            mark[x] = 1;
            frontier.push_back(x);
        }
    }
    if (!parallel) {
        while (!frontier.empty()) {
            const std::int64_t x = frontier.back();
            frontier.pop_back();
            expand(x, [&](std::int64_t y) {
                if (!mark[y]) {
                    mark[y] = 1;
                    frontier.push_back(y);
                }
            });
        }
        return mark;
    }
    std::vector<std::int64_t> next;
    while (!frontier.empty()) {
        next.clear();
        const auto count = static_cast<std::int64_t>(frontier.size());
#pragma omp parallel
        {
            std::vector<std::int64_t> local;
#pragma omp for schedule(dynamic, 256) nowait
            for (std::int64_t i = 0; i < count; ++i) {
                expand(frontier[i], [&](std::int64_t y) {
                    std::atomic_ref<std::uint8_t> cell(mark[y]);
                    if (cell.load(std::memory_order_relaxed) != 0) return;
                    std::uint8_t expected = 0;
                    if (cell.compare_exchange_strong(expected, 1, std::memory_order_acq_rel)) {
                        local.push_back(y);
                    }
                });
            }
#pragma omp critical
            next.insert(next.end(), local.begin(), local.end());
        }
        frontier.swap(next);
    }
    return mark;
}

}  // namespace

Reachability alternating_reachability(const BiDoubleGraph& bd, const Matching& m, bool parallel) {
    if (bd.left_bound() != bd.right_bound) {
        throw UsageError("alternating reachability needs a double cover");
    }
    const std::size_t nodes = 2 * bd.left_bound();
    Reachability out;

    std::vector<std::int64_t> seeds;
    for (VertexId v : bd.live) {
        if (m.left[v] == kNoVertex) seeds.push_back(left_node(v));
    }
    out.from_source = mark_reachable(
        nodes, std::move(seeds),
        [&](std::int64_t x, auto&& emit) {
            const auto v = static_cast<VertexId>(x >> 1);
            if ((x & 1) == 0) {
                for (VertexId r : bd.row(v)) emit(right_node(r));
            } else if (m.right[v] != kNoVertex) {
                emit(left_node(m.right[v]));
            }
        },
        parallel);

    seeds.clear();
    for (VertexId v : bd.live) {
        if (m.right[v] == kNoVertex) seeds.push_back(right_node(v));
    }
    // Reverse arcs; the cover is symmetric, so the rows of R_v equal those of L_v.
    out.to_sink = mark_reachable(
        nodes, std::move(seeds),
        [&](std::int64_t x, auto&& emit) {
            const auto v = static_cast<VertexId>(x >> 1);
            if ((x & 1) == 1) {
                for (VertexId u : bd.row(v)) emit(left_node(u));
            } else if (m.left[v] != kNoVertex) {
                emit(right_node(m.left[v]));
            }
        },
        parallel);
    return out;
}

std::int64_t HalfIntegralSolution::doubled_objective() const {
    std::int64_t total = 0;
    for (auto x : doubled) {
        if (x > 0) total += x;
    }
    return total;
}

namespace {

std::vector<VertexId> with_value(const std::vector<std::int8_t>& doubled, std::int8_t value) {
    std::vector<VertexId> out;
    for (std::size_t v = 0; v < doubled.size(); ++v) {
        if (doubled[v] == value) out.push_back(static_cast<VertexId>(v));
    }
    return out;
}

}  // namespace

std::vector<VertexId> HalfIntegralSolution::ones() const { return with_value(doubled, 2); }
std::vector<VertexId> HalfIntegralSolution::zeros() const { return with_value(doubled, 0); }
std::vector<VertexId> HalfIntegralSolution::halves() const { return with_value(doubled, 1); }

HalfIntegralSolution extract_half_integral(const BiDoubleGraph& bd, const Matching& m,
                                           bool parallel) {
    const Reachability reach = alternating_reachability(bd, m, parallel);
    const std::size_t bound = bd.left_bound();
    HalfIntegralSolution sol;
    sol.doubled.assign(bound, -1);

    auto is_free = [&](std::int64_t x) { return !reach.from_source[x] && !reach.to_sink[x]; };

    // Iterative Tarjan over the free part of the residual network. Components are
    // numbered in completion order, so sink components come first.
    const std::size_t nodes = 2 * bound;
    constexpr std::int32_t kUnseen = -1;
    std::vector<std::int32_t> index(nodes, kUnseen);
    std::vector<std::int32_t> low(nodes, 0);
    std::vector<std::int32_t> comp(nodes, -1);
    std::vector<std::uint8_t> on_stack(nodes, 0);
    std::vector<std::int64_t> scc_stack;
    struct Call {
        std::int64_t node;
        std::int64_t pos;
    };
    std::vector<Call> calls;
    std::int32_t next_index = 0;
    std::int32_t next_comp = 0;

    // The k-th free successor of `x`, or -1 when exhausted.
    auto successor = [&](std::int64_t x, std::int64_t& pos) -> std::int64_t {
        const auto v = static_cast<VertexId>(x >> 1);
        if ((x & 1) == 0) {
            const auto row = bd.row(v);
            while (pos < static_cast<std::int64_t>(row.size())) {
                const std::int64_t y = right_node(row[pos++]);
                if (is_free(y)) return y;
            }
            return -1;
        }
        if (pos++ == 0 && m.right[v] != kNoVertex) {
            const std::int64_t y = left_node(m.right[v]);
            if (is_free(y)) return y;
        }
        return -1;
    };

    for (VertexId v : bd.live) {
        for (std::int64_t root : {left_node(v), right_node(v)}) {
            if (!is_free(root) || index[root] != kUnseen) continue;
            calls.push_back({root, 0});
            index[root] = low[root] = next_index++;
            scc_stack.push_back(root);
            on_stack[root] = 1;
            while (!calls.empty()) {
                Call& call = calls.back();
                const std::int64_t y = successor(call.node, call.pos);
                if (y >= 0) {
                    if (index[y] == kUnseen) {
                        index[y] = low[y] = next_index++;
                        scc_stack.push_back(y);
                        on_stack[y] = 1;
                        calls.push_back({y, 0});
                    } else if (on_stack[y]) {
                        low[call.node] = std::min(low[call.node], index[y]);
                    }
                    continue;
                }
                const std::int64_t x = call.node;
                if (low[x] == index[x]) {
                    std::int64_t w;
                    do {
                        w = scc_stack.back();
                        scc_stack.pop_back();
                        on_stack[w] = 0;
                        comp[w] = next_comp;
                    } while (w != x);
                    ++next_comp;
                }
                calls.pop_back();
                if (!calls.empty()) {
                    const std::int64_t parent = calls.back().node;
                    low[parent] = std::min(low[parent], low[x]);
                }
            }
        }
    }

    for (VertexId v : bd.live) {
        const std::int64_t l = left_node(v);
        const std::int64_t r = right_node(v);
        std::int8_t value;
        if (reach.from_source[l] && !reach.from_source[r]) {
            value = 2;
        } else if (reach.from_source[r] && !reach.from_source[l]) {
            value = 0;
        } else if (reach.from_source[l]) {
            value = 1;
        } else if (reach.to_sink[l] || reach.to_sink[r]) {
            // Mirror images of the cases above; kept for robustness.
            value = reach.to_sink[r] && !reach.to_sink[l] ? 2 : (reach.to_sink[l] && !reach.to_sink[r] ? 0 : 1);
        } else if (comp[l] == comp[r]) {
            value = 1;
        } else {
            value = comp[l] < comp[r] ? 2 : 0;
        }
        sol.doubled[v] = value;
    }
    return sol;
}

LpStepResult apply_lp(Graph& g, Matching& matching, const LpOptions& options,
                      std::vector<ReductionRecord>& records, RuleCounters& counters) {
    LpStepResult result;
    const BiDoubleGraph bd = BiDoubleGraph::build(g);
    reuse_matching(bd, matching);
    result.matching_size = maximum_matching(bd, matching, options.parallel, options.seed);
    const HalfIntegralSolution sol = extract_half_integral(bd, matching, options.parallel);
    LpRecord record{sol.ones(), sol.zeros()};
    if (record.ones.empty() && record.zeros.empty()) return result;

    for (VertexId v : record.ones) {
        bool clash = false;
        g.for_each_neighbor(v, [&](VertexId u) { clash = clash || sol.doubled[u] != 0; });
        if (clash) {
            throw InvariantViolation("LP solution puts vertex " + std::to_string(v) +
                                     " at 1 next to a non-zero neighbor");
        }
    }

    std::vector<VertexId> all = record.ones;
    all.insert(all.end(), record.zeros.begin(), record.zeros.end());
    const auto count = static_cast<std::int64_t>(all.size());
    std::int64_t failures = 0;
#pragma omp parallel for schedule(static) reduction(+ : failures) if (options.parallel)
    for (std::int64_t i = 0; i < count; ++i) {
        if (!g.try_hide(all[i])) ++failures;
    }
    if (failures != 0) throw InvariantViolation("LP reduction hid a vertex twice");

    result.offset = static_cast<std::int64_t>(record.ones.size());
    result.removed = count;
    counters[Rule::LinearProgram] += count;
    records.emplace_back(std::move(record));
    return result;
}

}  // namespace fastker
