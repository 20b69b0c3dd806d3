#include "fastker/restore.hpp"

#include <algorithm>
#include <string>

#include "fastker/errors.hpp"

namespace fastker {

namespace {

struct Undo {
    std::vector<std::uint8_t>& in;

    void set(VertexId v) { in[v] = 1; }
    // Picks p[first], p[first + 2], ... strictly below `end`.
    void alternate(const std::vector<VertexId>& p, std::size_t first, std::size_t end) {
        for (std::size_t i = first; i < end; i += 2) in[p[i]] = 1;
    }

    void operator()(const DegreeZeroRecord& r) { set(r.v); }
    // A selected neighbor can only come from a different replay order; keep it.
    void operator()(const DegreeOneRecord& r) {
        if (!in[r.u]) set(r.v);
    }
    void operator()(const PathRecord& r) {
        const std::size_t len = r.path.size();
        switch (r.kind) {
            case PathCase::Cycle:
                alternate(r.path, 0, 2 * (len / 2));
                break;
            case PathCase::ExcludeEndpoints:
                break;
            case PathCase::EvenBridge:
                if (in[r.a]) {
                    alternate(r.path, 1, len);
                } else {
                    alternate(r.path, 0, len);
                }
                break;
            case PathCase::OddFold:
                if (in[r.a]) {
                    set(r.b);
                    alternate(r.path, 1, len);
                } else {
                    alternate(r.path, 0, len);
                }
                break;
        }
    }
    void operator()(const FoldRecord& r) {
        if (in[r.site]) {
            in[r.site] = 0;
            set(r.u);
            set(r.w);
        } else {
            set(r.v);
        }
    }
    void operator()(const IsolatedCliqueRecord& r) {
        for (VertexId x : r.clique) {
            if (in[x]) return;
        }
        set(r.v);
    }
    void operator()(const TwinIncludedRecord& r) {
        set(r.u);
        set(r.v);
    }
    void operator()(const TwinFoldedRecord& r) {
        if (in[r.gadget]) {
            in[r.gadget] = 0;
            for (VertexId x : r.neighbors) set(x);
        } else {
            set(r.u);
            set(r.v);
        }
    }
    void operator()(const UnconfinedRecord&) {}
    void operator()(const DiamondRecord&) {}
    void operator()(const LpRecord& r) {
        for (VertexId v : r.ones) set(v);
    }
};

}  // namespace

IndependentSet undo_all(const ReductionLog& log, std::vector<std::uint8_t> in_set) {
    Undo undo{in_set};
    for (auto seg = log.segments.rbegin(); seg != log.segments.rend(); ++seg) {
        for (auto rec = seg->records.rbegin(); rec != seg->records.rend(); ++rec) {
            std::visit(undo, *rec);
        }
    }
    IndependentSet out;
    for (std::size_t v = 0; v < in_set.size(); ++v) {
        if (!in_set[v]) continue;
        if (v >= log.input_vertex_count) {
            throw InvariantViolation("gadget vertex " + std::to_string(v) +
                                     " survived the undo replay");
        }
        out.push_back(static_cast<VertexId>(v));
    }
    return out;
}

IndependentSet undo_all(const ReductionLog& log, const Graph& kernel,
                        std::span<const VertexId> kernel_set, std::span<const VertexId> vertex_map,
                        std::size_t working_ids) {
    if (!validate_independent(kernel, kernel_set)) {
        throw MalformedInput("the kernel set is not independent in the kernel");
    }
    return undo_all(log, kernel_set, vertex_map, working_ids);
}

IndependentSet undo_all(const ReductionLog& log, std::span<const VertexId> kernel_set,
                        std::span<const VertexId> vertex_map, std::size_t working_ids) {
    std::vector<std::uint8_t> in_set(std::max(working_ids, log.input_vertex_count), 0);
    for (VertexId k : kernel_set) {
        if (k < 0 || static_cast<std::size_t>(k) >= vertex_map.size()) {
            throw UsageError("kernel vertex " + std::to_string(k) + " is out of range");
        }
        const VertexId w = vertex_map[k];
        if (w < 0 || static_cast<std::size_t>(w) >= in_set.size()) {
            throw UsageError("vertex map entry " + std::to_string(w) + " is out of range");
        }
        in_set[w] = 1;
    }
    return undo_all(log, std::move(in_set));
}

bool validate_independent(const Graph& g, std::span<const VertexId> s) {
    std::vector<std::uint8_t> member(g.id_bound(), 0);
    for (VertexId v : s) {
        if (v < 0 || static_cast<std::size_t>(v) >= g.id_bound()) {
            throw MalformedInput("set member " + std::to_string(v) + " is not a vertex id");
        }
        if (!g.alive(v)) return false;
        if (member[v]) return false;
        member[v] = 1;
    }
    for (VertexId v : s) {
        bool clash = false;
        g.for_each_neighbor(v, [&](VertexId u) { clash = clash || member[u]; });
        if (clash) return false;
    }
    return true;
}

}  // namespace fastker
