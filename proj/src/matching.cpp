#include "fastker/matching.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <random>

#include <omp.h>

namespace fastker {

BiDoubleGraph BiDoubleGraph::build(const Graph& g) {
    BiDoubleGraph bd;
    const std::size_t bound = g.id_bound();
    bd.right_bound = bound;
    bd.offsets.assign(bound + 1, 0);
    for (std::size_t v = 0; v < bound; ++v) {
        const auto vid = static_cast<VertexId>(v);
        if (!g.alive(vid)) continue;
        bd.offsets[v + 1] = g.degree(vid);
        bd.live.push_back(vid);
    }
    for (std::size_t v = 0; v < bound; ++v) bd.offsets[v + 1] += bd.offsets[v];
    bd.targets.resize(static_cast<std::size_t>(bd.offsets[bound]));
    const auto count = static_cast<std::int64_t>(bd.live.size());
#pragma omp parallel for schedule(dynamic, 512)
    for (std::int64_t i = 0; i < count; ++i) {
        const VertexId v = bd.live[i];
        auto pos = bd.offsets[v];
        g.for_each_neighbor(v, [&](VertexId u) { bd.targets[pos++] = u; });
    }
    return bd;
}

BiDoubleGraph BiDoubleGraph::from_bipartite(std::size_t left, std::size_t right,
                                            const std::vector<Edge>& left_right) {
    BiDoubleGraph bd;
    bd.right_bound = right;
    std::vector<std::vector<VertexId>> rows(left);
    for (const Edge& e : left_right) rows[e.u].push_back(e.v);
    bd.offsets.assign(left + 1, 0);
    for (std::size_t l = 0; l < left; ++l) {
        auto& row = rows[l];
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
        bd.offsets[l + 1] = bd.offsets[l] + static_cast<std::int64_t>(row.size());
        bd.targets.insert(bd.targets.end(), row.begin(), row.end());
        bd.live.push_back(static_cast<VertexId>(l));
    }
    return bd;
}

bool BiDoubleGraph::adjacent(VertexId l, VertexId r) const {
    if (l < 0 || static_cast<std::size_t>(l) >= left_bound()) return false;
    const auto row_span = row(l);
    return std::binary_search(row_span.begin(), row_span.end(), r);
}

void Matching::reserve(std::size_t left_size, std::size_t right_size) {
    if (left.size() < left_size) left.resize(left_size, kNoVertex);
    if (right.size() < right_size) right.resize(right_size, kNoVertex);
}

std::size_t Matching::size() const {
    return static_cast<std::size_t>(
        std::count_if(left.begin(), left.end(), [](VertexId r) { return r != kNoVertex; }));
}

bool Matching::valid(const BiDoubleGraph& bd) const {
    for (std::size_t l = 0; l < left.size(); ++l) {
        const VertexId r = left[l];
        if (r == kNoVertex) continue;
        if (static_cast<std::size_t>(r) >= right.size()) return false;
        if (right[r] != static_cast<VertexId>(l)) return false;
        if (!bd.adjacent(static_cast<VertexId>(l), r)) return false;
    }
    for (std::size_t r = 0; r < right.size(); ++r) {
        const VertexId l = right[r];
        if (l == kNoVertex) continue;
        if (static_cast<std::size_t>(l) >= left.size() || left[l] != static_cast<VertexId>(r)) {
            return false;
        }
    }
    return true;
}

std::size_t reuse_matching(const BiDoubleGraph& bd, Matching& m) {
    m.reserve(bd.left_bound(), bd.right_bound);
    std::size_t kept = 0;
    for (std::size_t l = 0; l < m.left.size(); ++l) {
        const VertexId r = m.left[l];
        if (r == kNoVertex) continue;
        if (bd.adjacent(static_cast<VertexId>(l), r) &&
            m.right[r] == static_cast<VertexId>(l)) {
            ++kept;
        } else {
            m.left[l] = kNoVertex;
            if (static_cast<std::size_t>(r) < m.right.size() &&
                m.right[r] == static_cast<VertexId>(l)) {
                m.right[r] = kNoVertex;
            }
        }
    }
    for (std::size_t r = 0; r < m.right.size(); ++r) {
        const VertexId l = m.right[r];
        if (l != kNoVertex && m.left[l] != static_cast<VertexId>(r)) m.right[r] = kNoVertex;
    }
    return kept;
}

std::size_t karp_sipser(const BiDoubleGraph& bd, Matching& m, std::uint64_t seed) {
    m.reserve(bd.left_bound(), bd.right_bound);
    const std::size_t nl = bd.left_bound();
    const std::size_t nr = bd.right_bound;

    // Column view for right-side degrees.
    std::vector<std::int64_t> col_offsets(nr + 1, 0);
    for (VertexId r : bd.targets) ++col_offsets[r + 1];
    for (std::size_t r = 0; r < nr; ++r) col_offsets[r + 1] += col_offsets[r];
    std::vector<VertexId> cols(bd.targets.size());
    {
        auto fill = col_offsets;
        for (std::size_t l = 0; l < nl; ++l) {
            for (VertexId r : bd.row(static_cast<VertexId>(l))) cols[fill[r]++] = static_cast<VertexId>(l);
        }
    }

    std::vector<std::int32_t> deg_l(nl, 0);
    std::vector<std::int32_t> deg_r(nr, 0);
    for (std::size_t l = 0; l < nl; ++l) {
        if (m.left[l] != kNoVertex) continue;
        for (VertexId r : bd.row(static_cast<VertexId>(l))) {
            if (m.right[r] == kNoVertex) {
                ++deg_l[l];
                ++deg_r[r];
            }
        }
    }

    // Entries are (vertex << 1) | side, side 0 = left.
    std::vector<std::int64_t> ones;
    for (std::size_t l = 0; l < nl; ++l) {
        if (deg_l[l] == 1) ones.push_back(static_cast<std::int64_t>(l) << 1);
    }
    for (std::size_t r = 0; r < nr; ++r) {
        if (deg_r[r] == 1) ones.push_back((static_cast<std::int64_t>(r) << 1) | 1);
    }

    std::size_t added = 0;
    auto match = [&](VertexId l, VertexId r) {
        m.left[l] = r;
        m.right[r] = l;
        ++added;
        for (VertexId r2 : bd.row(l)) {
            if (m.right[r2] == kNoVertex && --deg_r[r2] == 1) {
                ones.push_back((static_cast<std::int64_t>(r2) << 1) | 1);
            }
        }
        for (std::int64_t i = col_offsets[r]; i < col_offsets[r + 1]; ++i) {
            const VertexId l2 = cols[i];
            if (m.left[l2] == kNoVertex && --deg_l[l2] == 1) {
                ones.push_back(static_cast<std::int64_t>(l2) << 1);
            }
        }
    };
    auto drain = [&] {
        while (!ones.empty()) {
            const std::int64_t item = ones.back();
            ones.pop_back();
            const auto id = static_cast<VertexId>(item >> 1);
            if (item & 1) {
                if (m.right[id] != kNoVertex) continue;
                for (std::int64_t i = col_offsets[id]; i < col_offsets[id + 1]; ++i) {
                    if (m.left[cols[i]] == kNoVertex) {
                        match(cols[i], id);
                        break;
                    }
                }
            } else {
                if (m.left[id] != kNoVertex) continue;
                for (VertexId r : bd.row(id)) {
                    if (m.right[r] == kNoVertex) {
                        match(id, r);
                        break;
                    }
                }
            }
        }
    };

    drain();
    std::vector<VertexId> order;
    for (VertexId l : bd.live) {
        if (m.left[l] == kNoVertex && deg_l[l] > 0) order.push_back(l);
    }
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    for (VertexId l : order) {
        if (m.left[l] != kNoVertex || deg_l[l] == 0) continue;
        const auto row = bd.row(l);
        const std::size_t start = rng() % row.size();
        for (std::size_t k = 0; k < row.size(); ++k) {
            const VertexId r = row[(start + k) % row.size()];
            if (m.right[r] == kNoVertex) {
                match(l, r);
                break;
            }
        }
        drain();
    }
    return added;
}

std::size_t augment_parallel(const BiDoubleGraph& bd, Matching& m) {
    m.reserve(bd.left_bound(), bd.right_bound);
    std::vector<std::uint8_t> visited(bd.right_bound, 0);
    std::size_t total = 0;

    auto load = [](std::vector<VertexId>& a, VertexId i) {
        return std::atomic_ref<VertexId>(a[i]).load(std::memory_order_acquire);
    };
    auto store = [](std::vector<VertexId>& a, VertexId i, VertexId value) {
        std::atomic_ref<VertexId>(a[i]).store(value, std::memory_order_release);
    };
    auto claim = [&](VertexId r) {
        std::uint8_t expected = 0;
        return std::atomic_ref<std::uint8_t>(visited[r]).compare_exchange_strong(
            expected, 1, std::memory_order_acq_rel);
    };

    struct Frame {
        VertexId l;
        std::int64_t pos;
        VertexId via;
    };

    while (true) {
        std::vector<VertexId> roots;
        for (VertexId l : bd.live) {
            if (m.left[l] == kNoVertex && !bd.row(l).empty()) roots.push_back(l);
        }
        if (roots.empty()) break;
        std::fill(visited.begin(), visited.end(), 0);
        std::size_t found_this_round = 0;
        const auto count = static_cast<std::int64_t>(roots.size());

#pragma omp parallel reduction(+ : found_this_round)
        {
            std::vector<Frame> stack;
#pragma omp for schedule(dynamic, 16)
            for (std::int64_t i = 0; i < count; ++i) {
                stack.clear();
                stack.push_back({roots[i], 0, kNoVertex});
                VertexId free_right = kNoVertex;
                bool fresh = true;
                while (!stack.empty()) {
                    Frame& top = stack.back();
                    const auto row = bd.row(top.l);
                    if (fresh) {
                        // Lookahead for a free right vertex next to the new frame.
                        for (VertexId r : row) {
                            if (load(m.right, r) == kNoVertex && claim(r)) {
                                free_right = r;
                                break;
                            }
                        }
                        if (free_right != kNoVertex) break;
                        fresh = false;
                    }
                    bool descended = false;
                    while (top.pos < static_cast<std::int64_t>(row.size())) {
                        const VertexId r = row[top.pos++];
                        if (!claim(r)) continue;
                        const VertexId next = load(m.right, r);
                        if (next == kNoVertex) {
                            free_right = r;
                            break;
                        }
                        top.via = r;
                        stack.push_back({next, 0, kNoVertex});
                        descended = true;
                        fresh = true;
                        break;
                    }
                    if (free_right != kNoVertex) break;
                    if (!descended) stack.pop_back();
                }
                if (free_right != kNoVertex) {
                    VertexId r = free_right;
                    for (std::size_t j = stack.size(); j-- > 0;) {
                        const VertexId l = stack[j].l;
                        store(m.left, l, r);
                        store(m.right, r, l);
                        if (j > 0) r = stack[j - 1].via;
                    }
                    ++found_this_round;
                }
            }
        }
        total += found_this_round;
        if (found_this_round == 0) break;
    }
    return total;
}

std::size_t hopcroft_karp(const BiDoubleGraph& bd, Matching& m) {
    m.reserve(bd.left_bound(), bd.right_bound);
    const std::size_t nl = bd.left_bound();
    constexpr std::int32_t kInf = std::numeric_limits<std::int32_t>::max();
    std::vector<std::int32_t> dist(nl, kInf);
    std::vector<std::int64_t> it(nl, 0);
    std::vector<VertexId> queue;
    std::vector<VertexId> stack;
    std::size_t total = 0;

    while (true) {
        queue.clear();
        for (std::size_t l = 0; l < nl; ++l) {
            if (m.left[l] == kNoVertex) {
                dist[l] = 0;
                queue.push_back(static_cast<VertexId>(l));
            } else {
                dist[l] = kInf;
            }
        }
        bool reachable_free = false;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const VertexId l = queue[head];
            for (VertexId r : bd.row(l)) {
                const VertexId next = m.right[r];
                if (next == kNoVertex) {
                    reachable_free = true;
                } else if (dist[next] == kInf) {
                    dist[next] = dist[l] + 1;
                    queue.push_back(next);
                }
            }
        }
        if (!reachable_free) break;

        std::fill(it.begin(), it.end(), 0);
        std::size_t phase = 0;
        for (std::size_t root = 0; root < nl; ++root) {
            if (m.left[root] != kNoVertex || dist[root] != 0) continue;
            stack.assign(1, static_cast<VertexId>(root));
            while (!stack.empty()) {
                const VertexId l = stack.back();
                const auto row = bd.row(l);
                if (it[l] == static_cast<std::int64_t>(row.size())) {
                    dist[l] = kInf;
                    stack.pop_back();
                    if (!stack.empty()) ++it[stack.back()];
                    continue;
                }
                const VertexId r = row[it[l]];
                const VertexId next = m.right[r];
                if (next == kNoVertex) {
                    for (VertexId x : stack) {
                        const VertexId rx = bd.row(x)[it[x]];
                        m.left[x] = rx;
                        m.right[rx] = x;
                    }
                    ++phase;
                    break;
                }
                if (dist[next] != kInf && dist[next] == dist[l] + 1) {
                    stack.push_back(next);
                } else {
                    ++it[l];
                }
            }
        }
        total += phase;
        if (phase == 0) break;
    }
    return total;
}

std::size_t maximum_matching(const BiDoubleGraph& bd, Matching& m, bool parallel,
                             std::uint64_t seed) {
    m.reserve(bd.left_bound(), bd.right_bound);
    // A matching reused from the previous round is usually almost complete; the
    // greedy pass would cost a full scan for a handful of pairs.
    std::size_t free_left = 0;
    for (VertexId v : bd.live) free_left += m.left[v] == kNoVertex ? 1 : 0;
    if (free_left * 20 > bd.live.size()) karp_sipser(bd, m, seed);
    if (parallel) {
        augment_parallel(bd, m);
    } else {
        hopcroft_karp(bd, m);
    }
    return m.size();
}

}  // namespace fastker
