#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

#include "fastker/graph.hpp"
#include "fastker/partition.hpp"

namespace fastker {

/// Rule families, used for toggles and per-rule removal counts.
enum class Rule : std::uint8_t {
    DegreeZero,
    DegreeOne,
    DegreeTwoPath,
    IsolatedClique,
    Fold,
    TwinIncluded,
    TwinFolded,
    Unconfined,
    Diamond,
    LinearProgram,
};
inline constexpr std::size_t kRuleCount = 10;

std::string_view rule_name(Rule rule);

/// Net live-vertex decrease attributed to each rule.
struct RuleCounters {
    std::array<std::int64_t, kRuleCount> removed{};

    std::int64_t& operator[](Rule r) { return removed[static_cast<std::size_t>(r)]; }
    std::int64_t operator[](Rule r) const { return removed[static_cast<std::size_t>(r)]; }
    std::int64_t total() const;
    RuleCounters& operator+=(const RuleCounters& other);
};

struct DegreeZeroRecord {
    VertexId v;
};

struct DegreeOneRecord {
    VertexId v;
    VertexId u;
};

enum class PathCase : std::uint8_t {
    /// Whole component is a cycle of degree-2 vertices.
    Cycle,
    /// Endpoints are provably outside some MIS and were dropped; path stays.
    ExcludeEndpoints,
    /// Even path removed; endpoints joined by an edge.
    EvenBridge,
    /// Odd path removed; endpoints merged into `a`.
    OddFold,
};

/// Maximal degree-two path p_1..p_L with endpoints a (next to p_1) and b (next to p_L).
struct PathRecord {
    PathCase kind;
    std::vector<VertexId> path;
    VertexId a = kNoVertex;
    VertexId b = kNoVertex;
};

/// Degree-2 vertex v with nonadjacent neighbors u, w folded onto `site` (v or u).
struct FoldRecord {
    VertexId v;
    VertexId u;
    VertexId w;
    VertexId site;
};

struct IsolatedCliqueRecord {
    VertexId v;
    std::vector<VertexId> clique;
};

struct TwinIncludedRecord {
    VertexId u;
    VertexId v;
    std::array<VertexId, 3> neighbors;
};

struct TwinFoldedRecord {
    VertexId u;
    VertexId v;
    std::array<VertexId, 3> neighbors;
    VertexId gadget;
};

struct UnconfinedRecord {
    VertexId v;
};

struct DiamondRecord {
    VertexId v;
};

struct LpRecord {
    std::vector<VertexId> ones;
    std::vector<VertexId> zeros;
};

using ReductionRecord =
    std::variant<DegreeZeroRecord, DegreeOneRecord, PathRecord, FoldRecord, IsolatedCliqueRecord,
                 TwinIncludedRecord, TwinFoldedRecord, UnconfinedRecord, DiamondRecord, LpRecord>;

/// Records produced by one block (or one global step) in one phase.
struct LogSegment {
    std::uint32_t phase = 0;
    BlockId block = -1;
    std::vector<ReductionRecord> records;
};

/// Ordered undo log. Segments of the same phase come from different blocks and
/// touch disjoint vertices; only the order inside a segment and across phases matters.
struct ReductionLog {
    std::size_t input_vertex_count = 0;
    std::vector<LogSegment> segments;

    void append(LogSegment segment) {
        if (!segment.records.empty()) segments.push_back(std::move(segment));
    }
    std::size_t record_count() const;
};

}  // namespace fastker
