#include "fastker/oracle.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "fastker/errors.hpp"

namespace fastker {

namespace {

using Mask = std::uint64_t;

struct Compact {
    std::vector<VertexId> ids;
    std::vector<Mask> adj;
};

Compact to_masks(const Graph& g, std::size_t limit, const char* who) {
    Compact c;
    std::vector<int> pos(g.id_bound(), -1);
    for (std::size_t v = 0; v < g.id_bound(); ++v) {
        if (!g.alive(static_cast<VertexId>(v))) continue;
        pos[v] = static_cast<int>(c.ids.size());
        c.ids.push_back(static_cast<VertexId>(v));
    }
    if (c.ids.size() > limit) {
        throw OracleRefusal(std::string(who) + ": " + std::to_string(c.ids.size()) +
                            " vertices exceed the limit of " + std::to_string(limit));
    }
    c.adj.assign(c.ids.size(), 0);
    for (std::size_t i = 0; i < c.ids.size(); ++i) {
        g.for_each_neighbor(c.ids[i], [&](VertexId u) { c.adj[i] |= Mask{1} << pos[u]; });
    }
    return c;
}

class BranchAndBound {
public:
    explicit BranchAndBound(const std::vector<Mask>& adj) : adj_(adj) {}

    Mask solve(Mask all) {
        best_ = 0;
        best_size_ = 0;
        search(all, 0, 0);
        return best_;
    }

private:
    // Greedy clique cover of `mask`; its size bounds the MIS from above.
    int clique_cover(Mask mask) const {
        int cliques = 0;
        while (mask) {
            const int v = std::countr_zero(mask);
            Mask clique = Mask{1} << v;
            Mask common = adj_[v] & mask;
            while (common) {
                const int u = std::countr_zero(common);
                clique |= Mask{1} << u;
                common &= adj_[u];
            }
            mask &= ~clique;
            ++cliques;
        }
        return cliques;
    }

    void search(Mask cand, Mask chosen, int size) {
        // Forced moves: degree 0 joins, degree 1 joins and drops its neighbor.
        bool progress = true;
        while (progress && cand) {
            progress = false;
            for (Mask rest = cand; rest;) {
                const int v = std::countr_zero(rest);
                rest &= rest - 1;
                if (!(cand >> v & 1)) continue;
                const Mask nb = adj_[v] & cand;
                if (std::popcount(nb) <= 1) {
                    chosen |= Mask{1} << v;
                    ++size;
                    cand &= ~(nb | (Mask{1} << v));
                    rest &= cand;
                    progress = true;
                }
            }
        }
        if (!cand) {
            if (size > best_size_) {
                best_size_ = size;
                best_ = chosen;
            }
            return;
        }
        if (size + clique_cover(cand) <= best_size_) return;

        int pivot = -1;
        int pivot_degree = -1;
        for (Mask rest = cand; rest; rest &= rest - 1) {
            const int v = std::countr_zero(rest);
            const int d = std::popcount(adj_[v] & cand);
            if (d > pivot_degree) {
                pivot = v;
                pivot_degree = d;
            }
        }
        const Mask bit = Mask{1} << pivot;
        search(cand & ~(adj_[pivot] | bit), chosen | bit, size + 1);
        search(cand & ~bit, chosen, size);
    }

    const std::vector<Mask>& adj_;
    Mask best_ = 0;
    int best_size_ = 0;
};

}  // namespace

OracleResult brute_force_mis(const Graph& g, std::size_t limit) {
    const Compact c = to_masks(g, std::min<std::size_t>(limit, 64), "brute_force_mis");
    const std::size_t n = c.ids.size();
    const Mask all = n == 64 ? ~Mask{0} : ((Mask{1} << n) - 1);
    BranchAndBound bb(c.adj);
    const Mask best = bb.solve(all);
    OracleResult out;
    for (std::size_t i = 0; i < n; ++i) {
        if (best >> i & 1) out.set.push_back(c.ids[i]);
    }
    out.size = out.set.size();
    return out;
}

std::size_t mis_by_enumeration(const Graph& g) {
    const Compact c = to_masks(g, 20, "mis_by_enumeration");
    const std::size_t n = c.ids.size();
    std::size_t best = 0;
    for (Mask s = 0; s < (Mask{1} << n); ++s) {
        bool independent = true;
        for (Mask rest = s; rest && independent; rest &= rest - 1) {
            independent = (c.adj[std::countr_zero(rest)] & s) == 0;
        }
        if (independent) best = std::max<std::size_t>(best, std::popcount(s));
    }
    return best;
}

LpOracleResult lp_oracle(const Graph& g) {
    const Compact c = to_masks(g, 12, "lp_oracle");
    const std::size_t n = c.ids.size();
    std::vector<std::pair<int, int>> edges;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (c.adj[i] >> j & 1) edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
        }
    }
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= 3;

    std::vector<int> x(n, 0);
    std::int64_t best = -1;
    Mask halves = 0, ones = 0, zeros = 0;
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t rest = code;
        std::int64_t value = 0;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = static_cast<int>(rest % 3);
            rest /= 3;
            value += x[i];
        }
        if (value < best) continue;
        bool feasible = true;
        for (const auto& [a, b] : edges) {
            if (x[a] + x[b] > 2) {
                feasible = false;
                break;
            }
        }
        if (!feasible) continue;
        Mask h = 0, o = 0, z = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const Mask bit = Mask{1} << i;
            if (x[i] == 1) h |= bit;
            if (x[i] == 2) o |= bit;
            if (x[i] == 0) z |= bit;
        }
        if (value > best) {
            best = value;
            halves = h;
            ones = o;
            zeros = z;
        } else {
            halves &= h;
            ones &= o;
            zeros &= z;
        }
    }
    LpOracleResult out;
    out.doubled_objective = std::max<std::int64_t>(best, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (halves >> i & 1) out.half_set.push_back(c.ids[i]);
        if (ones >> i & 1) out.forced_ones.push_back(c.ids[i]);
        if (zeros >> i & 1) out.forced_zeros.push_back(c.ids[i]);
    }
    return out;
}

}  // namespace fastker
