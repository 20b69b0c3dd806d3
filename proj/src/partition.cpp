#include "fastker/partition.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <string>

#include <omp.h>

#include "fastker/errors.hpp"

namespace fastker {

namespace {

std::vector<VertexId> live_vertices(const Graph& g) {
    std::vector<VertexId> out;
    out.reserve(g.live_count());
    for (std::size_t v = 0; v < g.id_bound(); ++v) {
        if (g.alive(static_cast<VertexId>(v))) out.push_back(static_cast<VertexId>(v));
    }
    return out;
}

// BFS from `start` over unvisited live vertices; returns the visit order and
// leaves `stamp[v] == mark` on every reached vertex.
void bfs(const Graph& g, VertexId start, std::vector<std::uint32_t>& stamp, std::uint32_t mark,
         std::vector<VertexId>& order) {
    order.clear();
    order.push_back(start);
    stamp[start] = mark;
    for (std::size_t head = 0; head < order.size(); ++head) {
        g.for_each_neighbor(order[head], [&](VertexId u) {
            if (stamp[u] != mark) {
                stamp[u] = mark;
                order.push_back(u);
            }
        });
    }
}

}  // namespace

Partition partition_internal(const Graph& g, BlockId k, std::uint64_t seed,
                             const PartitionOptions& options) {
    if (k < 1) throw UsageError("block count must be at least 1");
    Partition p;
    p.k = k;
    p.block_of.assign(g.id_bound(), 0);

    const auto live = live_vertices(g);
    const std::size_t n_live = live.size();
    if (k == 1 || n_live == 0) return p;
    if (static_cast<std::size_t>(k) >= n_live) {
        for (std::size_t i = 0; i < n_live; ++i) p.block_of[live[i]] = static_cast<BlockId>(i);
        return p;
    }

    std::mt19937_64 rng(seed);

    // Components in a seed-dependent order, each traversed from a pseudo-peripheral vertex.
    std::vector<VertexId> roots = live;
    for (std::size_t i = roots.size(); i > 1; --i) {
        std::swap(roots[i - 1], roots[rng() % i]);
    }
    std::vector<std::uint32_t> visited(g.id_bound(), 0);
    std::vector<std::uint32_t> probe(g.id_bound(), 0);
    std::uint32_t probe_mark = 0;
    std::vector<VertexId> order;
    order.reserve(n_live);
    std::vector<VertexId> component;
    for (VertexId root : roots) {
        if (visited[root]) continue;
        bfs(g, root, probe, ++probe_mark, component);
        const VertexId far = component.back();
        bfs(g, far, visited, 1, component);
        order.insert(order.end(), component.begin(), component.end());
    }

    for (std::size_t i = 0; i < n_live; ++i) {
        p.block_of[order[i]] = static_cast<BlockId>((i * static_cast<std::size_t>(k)) / n_live);
    }

    // Integer arithmetic keeps 1.1 * 50 from rounding up to 56.
    const auto ideal = static_cast<std::int64_t>((n_live + k - 1) / static_cast<std::size_t>(k));
    const auto cap = ideal + static_cast<std::int64_t>(
                                 std::floor(options.imbalance * static_cast<double>(ideal) + 1e-9));
    std::vector<std::int64_t> size(k, 0);
    for (VertexId v : live) ++size[p.block_of[v]];

    std::vector<VertexId> sweep = live;
    std::vector<std::int32_t> count(k, 0);
    std::vector<BlockId> touched;
    for (int round = 0; round < options.refinement_rounds; ++round) {
        for (std::size_t i = sweep.size(); i > 1; --i) {
            std::swap(sweep[i - 1], sweep[rng() % i]);
        }
        std::size_t moved = 0;
        for (VertexId v : sweep) {
            const BlockId own = p.block_of[v];
            touched.clear();
            g.for_each_neighbor(v, [&](VertexId u) {
                const BlockId b = p.block_of[u];
                if (count[b]++ == 0) touched.push_back(b);
            });
            BlockId best = own;
            std::int32_t best_count = count[own];
            std::sort(touched.begin(), touched.end());
            for (BlockId b : touched) {
                if (count[b] > best_count && size[b] + 1 <= cap) {
                    best = b;
                    best_count = count[b];
                }
            }
            for (BlockId b : touched) count[b] = 0;
            if (best != own) {
                --size[own];
                ++size[best];
                p.block_of[v] = best;
                ++moved;
            }
        }
        if (moved == 0) break;
    }
    return p;
}

Partition load_partition(const std::filesystem::path& path, std::size_t n) {
    std::ifstream in(path);
    if (!in) throw MalformedInput("cannot open partition file " + path.string());
    Partition p;
    p.block_of.reserve(n);
    std::string line;
    std::size_t line_no = 0;
    BlockId max_id = -1;
    while (std::getline(in, line)) {
        ++line_no;
        auto first = line.find_first_not_of(" \t\r");
        auto last = line.find_last_not_of(" \t\r");
        if (first == std::string::npos) {
            throw MalformedInput(path.string() + ":" + std::to_string(line_no) +
                                 ": expected a block id, found an empty line");
        }
        if (line_no > n) {
            throw MalformedInput(path.string() + ":" + std::to_string(line_no) +
                                 ": more lines than the " + std::to_string(n) + " graph vertices");
        }
        BlockId id = 0;
        const char* begin = line.data() + first;
        const char* end = line.data() + last + 1;
        auto [ptr, ec] = std::from_chars(begin, end, id);
        if (ec != std::errc{} || ptr != end || id < 0) {
            throw MalformedInput(path.string() + ":" + std::to_string(line_no) +
                                 ": not a non-negative block id: '" + line + "'");
        }
        p.block_of.push_back(id);
        max_id = std::max(max_id, id);
    }
    if (p.block_of.size() != n) {
        throw MalformedInput(path.string() + ":" + std::to_string(line_no + 1) + ": expected " +
                             std::to_string(n) + " lines, found " + std::to_string(line_no));
    }
    p.k = max_id + 1;
    if (p.k == 0) p.k = 1;
    return p;
}

namespace {

bool compute_b0(const Graph& g, const Partition& p, VertexId v) {
    if (!g.alive(v)) return false;
    bool cross = false;
    const BlockId own = p[v];
    for (VertexId u : g.entries(v)) {
        if (p[u] != own && g.alive(u)) {
            cross = true;
            break;
        }
    }
    return cross;
}

bool compute_b1(const Graph& g, const BoundaryIndex& index, VertexId v) {
    if (!g.alive(v)) return false;
    if (index.b0[v]) return true;
    for (VertexId u : g.entries(v)) {
        if (index.b0[u] && g.alive(u)) return true;
    }
    return false;
}

}  // namespace

BoundaryIndex boundary_sets(const Graph& g, const Partition& p) {
    BoundaryIndex index;
    const auto bound = static_cast<std::int64_t>(g.id_bound());
    index.b0.assign(bound, 0);
    index.b1.assign(bound, 0);
#pragma omp parallel for schedule(dynamic, 1024)
    for (std::int64_t v = 0; v < bound; ++v) {
        index.b0[v] = compute_b0(g, p, static_cast<VertexId>(v));
    }
#pragma omp parallel for schedule(dynamic, 1024)
    for (std::int64_t v = 0; v < bound; ++v) {
        index.b1[v] = compute_b1(g, index, static_cast<VertexId>(v));
    }
    return index;
}

std::vector<VertexId> refresh_boundary(const Graph& g, const Partition& p, BoundaryIndex& index,
                                       std::span<const VertexId> touched) {
    index.reserve(g.id_bound());
    std::vector<VertexId> first_ring;
    std::vector<std::uint8_t> seen(g.id_bound(), 0);
    auto collect = [&](VertexId v, std::vector<VertexId>& out) {
        if (!seen[v]) {
            seen[v] = 1;
            out.push_back(v);
        }
    };
    for (VertexId v : touched) {
        collect(v, first_ring);
        for (VertexId u : g.entries(v)) collect(u, first_ring);
    }
    std::vector<VertexId> changed;
    std::vector<VertexId> second_ring = first_ring;
    for (VertexId v : first_ring) {
        const std::uint8_t b0 = compute_b0(g, p, v);
        if (b0 != index.b0[v]) {
            index.b0[v] = b0;
            changed.push_back(v);
        }
        for (VertexId u : g.entries(v)) collect(u, second_ring);
    }
    for (VertexId v : second_ring) {
        const std::uint8_t b1 = compute_b1(g, index, v);
        if (b1 != index.b1[v]) {
            index.b1[v] = b1;
            changed.push_back(v);
        }
    }
    std::sort(changed.begin(), changed.end());
    changed.erase(std::unique(changed.begin(), changed.end()), changed.end());
    return changed;
}

std::size_t cut_edges(const Graph& g, const Partition& p) {
    std::size_t twice = 0;
    for (std::size_t v = 0; v < g.id_bound(); ++v) {
        const auto vid = static_cast<VertexId>(v);
        if (!g.alive(vid)) continue;
        g.for_each_neighbor(vid, [&](VertexId u) {
            if (p[u] != p[vid]) ++twice;
        });
    }
    return twice / 2;
}

}  // namespace fastker
