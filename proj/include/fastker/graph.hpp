#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace fastker {

using VertexId = std::int32_t;
inline constexpr VertexId kNoVertex = -1;

struct Edge {
    VertexId u;
    VertexId v;
};

namespace detail {

// Fixed-size array of atomics that can be regrown while no other thread
// touches it. Values are copied on growth.
template <typename T>
class AtomicArray {
public:
    AtomicArray() = default;
    explicit AtomicArray(std::size_t n, T init = T{}) { resize(n, init); }
    AtomicArray(const AtomicArray& other) { copy_from(other); }
    AtomicArray& operator=(const AtomicArray& other) {
        if (this != &other) copy_from(other);
        return *this;
    }
    AtomicArray(AtomicArray&&) noexcept = default;
    AtomicArray& operator=(AtomicArray&&) noexcept = default;

    std::size_t size() const { return size_; }

    void resize(std::size_t n, T init = T{}) {
        auto fresh = std::make_unique<std::atomic<T>[]>(n);
        for (std::size_t i = 0; i < n; ++i) {
            fresh[i].store(i < size_ ? data_[i].load(std::memory_order_relaxed) : init,
                           std::memory_order_relaxed);
        }
        data_ = std::move(fresh);
        size_ = n;
    }

    std::atomic<T>& operator[](std::size_t i) { return data_[i]; }
    const std::atomic<T>& operator[](std::size_t i) const { return data_[i]; }

private:
    void copy_from(const AtomicArray& other) {
        data_.reset();
        size_ = 0;
        resize(other.size_);
        for (std::size_t i = 0; i < size_; ++i) {
            data_[i].store(other.data_[i].load(std::memory_order_relaxed),
                           std::memory_order_relaxed);
        }
    }

    std::unique_ptr<std::atomic<T>[]> data_;
    std::size_t size_ = 0;
};

}  // namespace detail

class Graph;

struct CompactedGraph;

/// Undirected simple graph with lazy vertex deletion.
///
/// Hidden vertices keep their adjacency entries in neighbor lists; every query
/// filters on the liveness flag. Adjacency lists are sorted. Ids of gadget
/// vertices are appended after all input ids.
///
/// Concurrency: liveness flags, live degrees and the live counter are atomics,
/// so hiding a vertex is safe while other threads read neighbors of vertices
/// they own. Mutating a vertex's adjacency list requires exclusive ownership
/// of that vertex; the caller (the block scheduler) guarantees it.
class Graph {
public:
    Graph() = default;
    explicit Graph(std::size_t n);

    /// Builds a graph on `n` vertices; mirrored and repeated edges collapse.
    /// Throws MalformedInput for out-of-range endpoints and self-loops.
    static Graph from_edges(std::size_t n, std::span<const Edge> edges);

    /// Builds from per-vertex neighbor lists that are already symmetric.
    static Graph from_adjacency(std::vector<std::vector<VertexId>> adjacency);

    /// Number of ids in use (input vertices plus gadgets).
    std::size_t id_bound() const { return used_.load(std::memory_order_acquire); }
    /// Number of ids that can be handed out without reallocating.
    std::size_t capacity() const { return adjacency_.size(); }
    std::size_t input_vertex_count() const { return input_count_; }

    bool alive(VertexId v) const { return alive_[v].load(std::memory_order_acquire) != 0; }
    int degree(VertexId v) const { return live_degree_[v].load(std::memory_order_acquire); }
    std::size_t live_count() const {
        return static_cast<std::size_t>(live_count_.load(std::memory_order_acquire));
    }
    std::size_t live_edge_count() const;

    /// Raw adjacency entries including hidden vertices.
    std::span<const VertexId> entries(VertexId v) const { return adjacency_[v]; }

    template <typename F>
    void for_each_neighbor(VertexId v, F&& f) const {
        for (VertexId u : adjacency_[v]) {
            if (alive(u)) f(u);
        }
    }

    /// Live neighbors of `v` appended to `out` (cleared first).
    void neighbors(VertexId v, std::vector<VertexId>& out) const;
    std::vector<VertexId> neighbors(VertexId v) const;

    /// True iff both endpoints are live and adjacent.
    bool has_edge(VertexId u, VertexId v) const;

    /// Hides a live vertex; throws UsageError when it is already hidden.
    void hide(VertexId v);
    /// Hides `v` if it is live; returns false when another caller got there first.
    bool try_hide(VertexId v);

    /// Appends a fresh vertex adjacent to `neighbors` (all live) and returns its id.
    /// Not safe to call concurrently unless `reserve` left room beforehand.
    VertexId add_gadget_vertex(std::span<const VertexId> neighbors);

    /// Hides every vertex of `hidden` and adds a gadget adjacent to `neighbors`.
    /// The live count drops by |hidden| - 1 in one step, so observers never see
    /// it rise.
    VertexId replace_with_gadget(std::span<const VertexId> hidden,
                                 std::span<const VertexId> neighbors);

    /// Replaces the adjacency of `v` and repairs the mirrored entries of live
    /// vertices. Entries pointing at hidden vertices are dropped from `v`'s
    /// list only; the hidden vertex's list is left as is.
    void rewrite_neighborhood(VertexId v, std::span<const VertexId> new_neighbors);

    /// Drops hidden entries from `v`'s list (owner-exclusive).
    void cleanup(VertexId v);
    /// Fraction of `v`'s entries that point at hidden vertices.
    double dead_fraction(VertexId v) const;

    /// Grows storage so that `total` ids are available (doubling policy).
    void reserve(std::size_t total);

    /// Copies the live part into a dense graph.
    CompactedGraph compact() const;

    /// Recomputes symmetry, sortedness and live degrees from scratch.
    bool check_invariants() const;

private:
    void grow_to(std::size_t total);
    bool hide_quietly(VertexId v);
    VertexId insert_gadget(std::span<const VertexId> neighbors);
    static void insert_sorted(std::vector<VertexId>& list, VertexId v);
    static bool erase_sorted(std::vector<VertexId>& list, VertexId v);

    std::vector<std::vector<VertexId>> adjacency_;
    detail::AtomicArray<std::uint8_t> alive_;
    detail::AtomicArray<std::int32_t> live_degree_;
    std::atomic<std::size_t> used_{0};
    std::atomic<std::int64_t> live_count_{0};
    std::size_t input_count_ = 0;

public:
    Graph(const Graph& other);
    Graph& operator=(const Graph& other);
    Graph(Graph&& other) noexcept;
    Graph& operator=(Graph&& other) noexcept;
};

struct CompactedGraph {
    Graph graph;
    /// new id of each old id, kNoVertex for hidden vertices
    std::vector<VertexId> new_of_old;
    /// old id of each new id
    std::vector<VertexId> old_of_new;
};

}  // namespace fastker
