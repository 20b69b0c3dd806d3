#include <algorithm>

#include "fastker/errors.hpp"
#include "fastker/reductions.hpp"

namespace fastker {

namespace {

class Preprocessor {
public:
    Preprocessor(Graph& g, std::vector<ReductionRecord>& records, bool use_paths)
        : g_(g), records_(records), use_paths_(use_paths), queued_(g.capacity(), 0) {}

    PreprocessResult run() {
        for (std::size_t i = g_.id_bound(); i-- > 0;) push(static_cast<VertexId>(i));
        while (!stack_.empty()) {
            const VertexId v = stack_.back();
            stack_.pop_back();
            queued_[v] = 0;
            if (!g_.alive(v)) continue;
            const int d = g_.degree(v);
            if (d == 0) {
                degree_zero(v);
            } else if (d == 1) {
                degree_one(v);
            } else if (d == 2 && use_paths_) {
                path(v);
            }
        }
        return result_;
    }

private:
    void push(VertexId v) {
        if (g_.alive(v) && g_.degree(v) <= 2 && !queued_[v]) {
            queued_[v] = 1;
            stack_.push_back(v);
        }
    }

    void hide(VertexId v) {
        g_.hide(v);
        g_.for_each_neighbor(v, [&](VertexId u) { push(u); });
    }

    VertexId first_neighbor(VertexId v) const {
        for (VertexId u : g_.entries(v)) {
            if (g_.alive(u)) return u;
        }
        return kNoVertex;
    }

    VertexId other_neighbor(VertexId v, VertexId not_this) const {
        for (VertexId u : g_.entries(v)) {
            if (g_.alive(u) && u != not_this) return u;
        }
        return kNoVertex;
    }

    void degree_zero(VertexId v) {
        records_.emplace_back(DegreeZeroRecord{v});
        g_.hide(v);
        result_.offset += 1;
        result_.removed += 1;
        result_.counters[Rule::DegreeZero] += 1;
    }

    void degree_one(VertexId v) {
        const VertexId u = first_neighbor(v);
        records_.emplace_back(DegreeOneRecord{v, u});
        g_.hide(v);
        hide(u);
        result_.offset += 1;
        result_.removed += 2;
        result_.counters[Rule::DegreeOne] += 2;
    }

    // Walks from `from` through `start` while vertices have degree two. Returns the
    // first vertex of other degree, or `origin` when the walk closes a cycle.
    VertexId walk(VertexId origin, VertexId start, std::vector<VertexId>& out) const {
        VertexId prev = origin;
        VertexId cur = start;
        while (cur != origin && g_.degree(cur) == 2) {
            out.push_back(cur);
            const VertexId next = other_neighbor(cur, prev);
            prev = cur;
            cur = next;
        }
        return cur;
    }

    void path(VertexId v) {
        const VertexId left_start = first_neighbor(v);
        const VertexId right_start = other_neighbor(v, left_start);

        std::vector<VertexId> left;
        const VertexId a = walk(v, left_start, left);
        if (a == v) {
            left.insert(left.begin(), v);
            cycle(std::move(left));
            return;
        }
        std::vector<VertexId> right;
        const VertexId b = walk(v, right_start, right);

        // A pendant endpoint: the degree-one rule eats into the path from there.
        if (g_.degree(a) < 2 || g_.degree(b) < 2) {
            degree_one(g_.degree(a) < 2 ? a : b);
            push(v);
            return;
        }

        std::vector<VertexId> p(left.rbegin(), left.rend());
        p.push_back(v);
        p.insert(p.end(), right.begin(), right.end());
        const std::size_t len = p.size();

        if (a == b) {
            hide(a);
            records_.emplace_back(PathRecord{PathCase::ExcludeEndpoints, std::move(p), a, a});
            result_.removed += 1;
            result_.counters[Rule::DegreeTwoPath] += 1;
            return;
        }
        const bool adjacent = g_.has_edge(a, b);
        if (adjacent && len % 2 == 1) {
            hide(a);
            hide(b);
            records_.emplace_back(PathRecord{PathCase::ExcludeEndpoints, std::move(p), a, b});
            result_.removed += 2;
            result_.counters[Rule::DegreeTwoPath] += 2;
            return;
        }
        for (VertexId x : p) g_.hide(x);
        if (len % 2 == 0) {
            if (!adjacent) {
                auto hood = g_.neighbors(a);
                hood.push_back(b);
                g_.rewrite_neighborhood(a, hood);
            }
            push(a);
            push(b);
            result_.offset += static_cast<std::int64_t>(len / 2);
            result_.removed += static_cast<std::int64_t>(len);
            result_.counters[Rule::DegreeTwoPath] += static_cast<std::int64_t>(len);
            records_.emplace_back(PathRecord{PathCase::EvenBridge, std::move(p), a, b});
            return;
        }
        // Odd path between nonadjacent endpoints: b merges into a.
        auto hood = g_.neighbors(a);
        g_.for_each_neighbor(b, [&](VertexId x) { hood.push_back(x); });
        hide(b);
        std::sort(hood.begin(), hood.end());
        hood.erase(std::unique(hood.begin(), hood.end()), hood.end());
        std::erase_if(hood, [&](VertexId x) { return x == b || !g_.alive(x); });
        g_.rewrite_neighborhood(a, hood);
        push(a);
        g_.for_each_neighbor(a, [&](VertexId x) { push(x); });
        result_.offset += static_cast<std::int64_t>((len + 1) / 2);
        result_.removed += static_cast<std::int64_t>(len + 1);
        result_.counters[Rule::DegreeTwoPath] += static_cast<std::int64_t>(len + 1);
        records_.emplace_back(PathRecord{PathCase::OddFold, std::move(p), a, b});
    }

    void cycle(std::vector<VertexId> ring) {
        const std::size_t len = ring.size();
        for (VertexId x : ring) g_.hide(x);
        result_.offset += static_cast<std::int64_t>(len / 2);
        result_.removed += static_cast<std::int64_t>(len);
        result_.counters[Rule::DegreeTwoPath] += static_cast<std::int64_t>(len);
        records_.emplace_back(PathRecord{PathCase::Cycle, std::move(ring), kNoVertex, kNoVertex});
    }

    Graph& g_;
    std::vector<ReductionRecord>& records_;
    bool use_paths_;
    std::vector<std::uint8_t> queued_;
    std::vector<VertexId> stack_;
    PreprocessResult result_;
};

}  // namespace

PreprocessResult reduce_degree_two_paths(Graph& g, std::vector<ReductionRecord>& records,
                                         bool use_paths) {
    return Preprocessor(g, records, use_paths).run();
}

}  // namespace fastker
