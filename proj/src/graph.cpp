#include "fastker/graph.hpp"

#include <algorithm>
#include <string>

#include "fastker/errors.hpp"

namespace fastker {

Graph::Graph(std::size_t n)
    : adjacency_(n), alive_(n, 1), live_degree_(n, 0), used_(n),
      live_count_(static_cast<std::int64_t>(n)), input_count_(n) {}

Graph::Graph(const Graph& other)
    : adjacency_(other.adjacency_), alive_(other.alive_), live_degree_(other.live_degree_),
      used_(other.used_.load()), live_count_(other.live_count_.load()),
      input_count_(other.input_count_) {}

Graph& Graph::operator=(const Graph& other) {
    if (this != &other) {
        adjacency_ = other.adjacency_;
        alive_ = other.alive_;
        live_degree_ = other.live_degree_;
        used_.store(other.used_.load());
        live_count_.store(other.live_count_.load());
        input_count_ = other.input_count_;
    }
    return *this;
}

Graph::Graph(Graph&& other) noexcept
    : adjacency_(std::move(other.adjacency_)), alive_(std::move(other.alive_)),
      live_degree_(std::move(other.live_degree_)), used_(other.used_.load()),
      live_count_(other.live_count_.load()), input_count_(other.input_count_) {
    other.used_ = 0;
    other.live_count_ = 0;
    other.input_count_ = 0;
}

Graph& Graph::operator=(Graph&& other) noexcept {
    if (this != &other) {
        adjacency_ = std::move(other.adjacency_);
        alive_ = std::move(other.alive_);
        live_degree_ = std::move(other.live_degree_);
        used_.store(other.used_.load());
        live_count_.store(other.live_count_.load());
        input_count_ = other.input_count_;
        other.used_ = 0;
        other.live_count_ = 0;
        other.input_count_ = 0;
    }
    return *this;
}

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges) {
    Graph g(n);
    for (const Edge& e : edges) {
        if (e.u < 0 || e.v < 0 || static_cast<std::size_t>(e.u) >= n ||
            static_cast<std::size_t>(e.v) >= n) {
            throw MalformedInput("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                                 ") has an endpoint outside [0, " + std::to_string(n) + ")");
        }
        if (e.u == e.v) {
            throw MalformedInput("self-loop at vertex " + std::to_string(e.u));
        }
        g.adjacency_[e.u].push_back(e.v);
        g.adjacency_[e.v].push_back(e.u);
    }
    for (std::size_t v = 0; v < n; ++v) {
        auto& list = g.adjacency_[v];
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
        g.live_degree_[v].store(static_cast<std::int32_t>(list.size()), std::memory_order_relaxed);
    }
    return g;
}

Graph Graph::from_adjacency(std::vector<std::vector<VertexId>> adjacency) {
    Graph g(adjacency.size());
    g.adjacency_ = std::move(adjacency);
    for (std::size_t v = 0; v < g.adjacency_.size(); ++v) {
        auto& list = g.adjacency_[v];
        std::sort(list.begin(), list.end());
        g.live_degree_[v].store(static_cast<std::int32_t>(list.size()), std::memory_order_relaxed);
    }
    return g;
}

std::size_t Graph::live_edge_count() const {
    std::size_t twice = 0;
    const std::size_t bound = id_bound();
    for (std::size_t v = 0; v < bound; ++v) {
        if (alive(static_cast<VertexId>(v))) twice += static_cast<std::size_t>(degree(static_cast<VertexId>(v)));
    }
    return twice / 2;
}

void Graph::neighbors(VertexId v, std::vector<VertexId>& out) const {
    out.clear();
    for (VertexId u : adjacency_[v]) {
        if (alive(u)) out.push_back(u);
    }
}

std::vector<VertexId> Graph::neighbors(VertexId v) const {
    std::vector<VertexId> out;
    neighbors(v, out);
    return out;
}

bool Graph::has_edge(VertexId u, VertexId v) const {
    if (u == v || !alive(u) || !alive(v)) return false;
    const auto& a = adjacency_[u];
    const auto& b = adjacency_[v];
    if (a.size() <= b.size()) return std::binary_search(a.begin(), a.end(), v);
    return std::binary_search(b.begin(), b.end(), u);
}

bool Graph::hide_quietly(VertexId v) {
    if (alive_[v].exchange(0, std::memory_order_acq_rel) == 0) return false;
    for (VertexId u : adjacency_[v]) {
        if (alive(u)) live_degree_[u].fetch_sub(1, std::memory_order_acq_rel);
    }
    return true;
}

bool Graph::try_hide(VertexId v) {
    if (!hide_quietly(v)) return false;
    live_count_.fetch_sub(1, std::memory_order_acq_rel);
    return true;
}

void Graph::hide(VertexId v) {
    if (!try_hide(v)) {
        throw UsageError("vertex " + std::to_string(v) + " is already hidden");
    }
}

VertexId Graph::add_gadget_vertex(std::span<const VertexId> neighbors) {
    const VertexId w = insert_gadget(neighbors);
    live_count_.fetch_add(1, std::memory_order_acq_rel);
    return w;
}

VertexId Graph::replace_with_gadget(std::span<const VertexId> hidden,
                                    std::span<const VertexId> neighbors) {
    for (VertexId v : hidden) {
        if (!alive(v)) throw UsageError("vertex " + std::to_string(v) + " is already hidden");
    }
    for (VertexId v : hidden) {
        if (!hide_quietly(v)) {
            throw UsageError("vertex " + std::to_string(v) + " is already hidden");
        }
    }
    const VertexId w = insert_gadget(neighbors);
    live_count_.fetch_sub(static_cast<std::int64_t>(hidden.size()) - 1, std::memory_order_acq_rel);
    return w;
}

VertexId Graph::insert_gadget(std::span<const VertexId> neighbors) {
    for (VertexId u : neighbors) {
        if (!alive(u)) {
            throw UsageError("gadget neighbor " + std::to_string(u) + " is hidden");
        }
    }
    const std::size_t id = used_.fetch_add(1, std::memory_order_acq_rel);
    if (id >= adjacency_.size()) grow_to(id + 1);
    const auto w = static_cast<VertexId>(id);

    std::vector<VertexId> list(neighbors.begin(), neighbors.end());
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    for (VertexId u : list) {
        insert_sorted(adjacency_[u], w);
        live_degree_[u].fetch_add(1, std::memory_order_acq_rel);
    }
    live_degree_[w].store(static_cast<std::int32_t>(list.size()), std::memory_order_release);
    adjacency_[w] = std::move(list);
    alive_[w].store(1, std::memory_order_release);
    return w;
}

void Graph::rewrite_neighborhood(VertexId v, std::span<const VertexId> new_neighbors) {
    if (!alive(v)) {
        throw UsageError("cannot rewrite the neighborhood of hidden vertex " + std::to_string(v));
    }
    std::vector<VertexId> fresh(new_neighbors.begin(), new_neighbors.end());
    std::sort(fresh.begin(), fresh.end());
    fresh.erase(std::unique(fresh.begin(), fresh.end()), fresh.end());
    for (VertexId u : fresh) {
        if (u == v) throw UsageError("self-loop requested at vertex " + std::to_string(v));
    }

    const auto& old = adjacency_[v];
    // Entries present in both lists are left alone, so a kept neighbor may die
    // concurrently. Only added entries must be alive.
    std::size_t i = 0, j = 0;
    while (i < old.size() && j < fresh.size()) {
        if (old[i] < fresh[j]) {
            ++i;
        } else if (fresh[j] < old[i]) {
            if (!alive(fresh[j])) {
                throw UsageError("new neighbor " + std::to_string(fresh[j]) + " of " +
                                 std::to_string(v) + " is hidden");
            }
            ++j;
        } else {
            ++i;
            ++j;
        }
    }
    for (; j < fresh.size(); ++j) {
        if (!alive(fresh[j])) {
            throw UsageError("new neighbor " + std::to_string(fresh[j]) + " of " +
                             std::to_string(v) + " is hidden");
        }
    }

    std::int32_t delta = 0;
    // Merge-walk the two sorted lists; only live entries get mirrored updates.
    i = 0;
    j = 0;
    while (i < old.size() || j < fresh.size()) {
        if (j == fresh.size() || (i < old.size() && old[i] < fresh[j])) {
            const VertexId u = old[i++];
            if (alive(u)) {
                erase_sorted(adjacency_[u], v);
                live_degree_[u].fetch_sub(1, std::memory_order_acq_rel);
                --delta;
            }
        } else if (i == old.size() || fresh[j] < old[i]) {
            const VertexId u = fresh[j++];
            insert_sorted(adjacency_[u], v);
            live_degree_[u].fetch_add(1, std::memory_order_acq_rel);
            ++delta;
        } else {
            ++i;
            ++j;
        }
    }
    adjacency_[v] = std::move(fresh);
    live_degree_[v].fetch_add(delta, std::memory_order_acq_rel);
}

void Graph::cleanup(VertexId v) {
    auto& list = adjacency_[v];
    std::erase_if(list, [this](VertexId u) { return !alive(u); });
}

double Graph::dead_fraction(VertexId v) const {
    const auto& list = adjacency_[v];
    if (list.empty()) return 0.0;
    const auto live = static_cast<double>(degree(v));
    return 1.0 - live / static_cast<double>(list.size());
}

void Graph::reserve(std::size_t total) {
    if (total > adjacency_.size()) grow_to(total);
}

void Graph::grow_to(std::size_t total) {
    std::size_t cap = std::max<std::size_t>(adjacency_.size(), 1);
    while (cap < total) cap *= 2;
    adjacency_.resize(cap);
    alive_.resize(cap, 0);
    live_degree_.resize(cap, 0);
}

void Graph::insert_sorted(std::vector<VertexId>& list, VertexId v) {
    auto it = std::lower_bound(list.begin(), list.end(), v);
    if (it == list.end() || *it != v) list.insert(it, v);
}

bool Graph::erase_sorted(std::vector<VertexId>& list, VertexId v) {
    auto it = std::lower_bound(list.begin(), list.end(), v);
    if (it == list.end() || *it != v) return false;
    list.erase(it);
    return true;
}

CompactedGraph Graph::compact() const {
    CompactedGraph out;
    const std::size_t bound = id_bound();
    out.new_of_old.assign(bound, kNoVertex);
    for (std::size_t v = 0; v < bound; ++v) {
        if (alive(static_cast<VertexId>(v))) {
            out.new_of_old[v] = static_cast<VertexId>(out.old_of_new.size());
            out.old_of_new.push_back(static_cast<VertexId>(v));
        }
    }
    std::vector<std::vector<VertexId>> adjacency(out.old_of_new.size());
    for (std::size_t i = 0; i < out.old_of_new.size(); ++i) {
        auto& list = adjacency[i];
        for_each_neighbor(out.old_of_new[i], [&](VertexId u) { list.push_back(out.new_of_old[u]); });
    }
    // Renumbering is monotone, so the lists stay sorted.
    out.graph = Graph::from_adjacency(std::move(adjacency));
    return out;
}

bool Graph::check_invariants() const {
    const std::size_t bound = id_bound();
    for (std::size_t vi = 0; vi < bound; ++vi) {
        const auto v = static_cast<VertexId>(vi);
        if (!alive(v)) continue;
        const auto& list = adjacency_[vi];
        if (!std::is_sorted(list.begin(), list.end())) return false;
        if (std::adjacent_find(list.begin(), list.end()) != list.end()) return false;
        int live = 0;
        for (VertexId u : list) {
            if (u == v || u < 0 || static_cast<std::size_t>(u) >= bound) return false;
            if (!alive(u)) continue;
            ++live;
            const auto& back = adjacency_[u];
            if (!std::binary_search(back.begin(), back.end(), v)) return false;
        }
        if (live != degree(v)) return false;
    }
    return true;
}

}  // namespace fastker
