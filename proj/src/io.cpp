#include "fastker/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>

#include "fastker/errors.hpp"

namespace fastker {

namespace {

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r'; }

// Splits on blanks and parses unsigned integers; returns false on any junk.
bool parse_numbers(std::string_view line, std::vector<std::int64_t>& out) {
    out.clear();
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && is_blank(line[i])) ++i;
        if (i == line.size()) break;
        std::size_t j = i;
        while (j < line.size() && !is_blank(line[j])) ++j;
        std::int64_t value = 0;
        auto [ptr, ec] = std::from_chars(line.data() + i, line.data() + j, value);
        if (ec != std::errc{} || ptr != line.data() + j || value < 0) return false;
        out.push_back(value);
        i = j;
    }
    return true;
}

bool is_comment(std::string_view line) {
    std::size_t i = 0;
    while (i < line.size() && is_blank(line[i])) ++i;
    return i < line.size() && line[i] == '%';
}

std::string where(const std::string& source, std::size_t line) {
    return source + ":" + std::to_string(line) + ": ";
}

}  // namespace

Graph parse_metis(std::istream& in, const std::string& source) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::int64_t> nums;

    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_comment(line)) continue;
        if (!parse_numbers(line, nums)) {
            throw MalformedInput(where(source, line_no) + "header is not a list of integers");
        }
        if (nums.empty()) continue;
        have_header = true;
        break;
    }
    if (!have_header) throw MalformedInput(source + ": missing header line");
    if (nums.size() < 2 || nums.size() > 4) {
        throw MalformedInput(where(source, line_no) + "header must read 'n m [fmt [ncon]]'");
    }
    const std::int64_t n64 = nums[0];
    const std::int64_t m64 = nums[1];
    if (n64 > std::numeric_limits<VertexId>::max()) {
        throw MalformedInput(where(source, line_no) + "too many vertices");
    }
    bool vertex_weights = false;
    bool edge_weights = false;
    std::int64_t ncon = 1;
    if (nums.size() >= 3) {
        const std::int64_t fmt = nums[2];
        if (fmt != 0 && fmt != 1 && fmt != 10 && fmt != 11 && fmt != 100 && fmt != 101 &&
            fmt != 110 && fmt != 111) {
            throw MalformedInput(where(source, line_no) + "unknown fmt " + std::to_string(fmt));
        }
        if (fmt >= 100) throw MalformedInput(where(source, line_no) + "vertex sizes unsupported");
        vertex_weights = (fmt / 10) % 10 == 1;
        edge_weights = fmt % 10 == 1;
    }
    if (nums.size() == 4) ncon = nums[3];
    if (!vertex_weights) ncon = 0;

    const auto n = static_cast<std::size_t>(n64);
    std::vector<std::vector<VertexId>> adjacency(n);
    // Line of each vertex, for naming both ends of an asymmetric edge.
    std::vector<std::size_t> line_of(n, 0);
    std::size_t vertex = 0;
    std::size_t directed = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_comment(line)) continue;
        if (!parse_numbers(line, nums)) {
            throw MalformedInput(where(source, line_no) + "expected integers, found '" + line + "'");
        }
        if (vertex == n) {
            if (nums.empty()) continue;  // trailing blank lines
            throw MalformedInput(where(source, line_no) + "more vertex lines than the " +
                                 std::to_string(n) + " announced in the header");
        }
        const auto v = static_cast<VertexId>(vertex);
        line_of[vertex] = line_no;
        std::size_t i = static_cast<std::size_t>(ncon);
        if (nums.size() < i) {
            throw MalformedInput(where(source, line_no) + "missing vertex weights");
        }
        const std::size_t step = edge_weights ? 2 : 1;
        if ((nums.size() - i) % step != 0) {
            throw MalformedInput(where(source, line_no) + "neighbor without edge weight");
        }
        auto& list = adjacency[vertex];
        for (; i < nums.size(); i += step) {
            const std::int64_t u = nums[i];
            if (u < 1 || u > n64) {
                throw MalformedInput(where(source, line_no) + "neighbor " + std::to_string(u) +
                                     " outside [1, " + std::to_string(n) + "]");
            }
            const auto w = static_cast<VertexId>(u - 1);
            if (w == v) {
                throw MalformedInput(where(source, line_no) + "self-loop at vertex " +
                                     std::to_string(u));
            }
            list.push_back(w);
        }
        std::sort(list.begin(), list.end());
        if (auto dup = std::adjacent_find(list.begin(), list.end()); dup != list.end()) {
            throw MalformedInput(where(source, line_no) + "neighbor " + std::to_string(*dup + 1) +
                                 " listed twice");
        }
        directed += list.size();
        ++vertex;
    }
    if (vertex != n) {
        throw MalformedInput(source + ": header announces " + std::to_string(n) +
                             " vertices but the body has " + std::to_string(vertex) + " lines");
    }
    for (std::size_t v = 0; v < n; ++v) {
        for (VertexId u : adjacency[v]) {
            const auto& back = adjacency[u];
            if (!std::binary_search(back.begin(), back.end(), static_cast<VertexId>(v))) {
                throw MalformedInput(source + ": edge " + std::to_string(v + 1) + "-" +
                                     std::to_string(u + 1) + " appears on line " +
                                     std::to_string(line_of[v]) + " but not on line " +
                                     std::to_string(line_of[u]));
            }
        }
    }
    if (directed != 2 * static_cast<std::size_t>(m64)) {
        throw MalformedInput(source + ": header announces " + std::to_string(m64) +
                             " edges but the body has " + std::to_string(directed / 2));
    }
    return Graph::from_adjacency(std::move(adjacency));
}

Graph read_metis(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw MalformedInput("cannot open graph file " + path.string());
    return parse_metis(in, path.string());
}

void write_metis(const Graph& g, std::ostream& out) {
    const auto compact = g.compact();
    const Graph& h = compact.graph;
    out << h.id_bound() << ' ' << h.live_edge_count() << '\n';
    std::string buffer;
    for (std::size_t v = 0; v < h.id_bound(); ++v) {
        buffer.clear();
        bool first = true;
        h.for_each_neighbor(static_cast<VertexId>(v), [&](VertexId u) {
            if (!first) buffer += ' ';
            first = false;
            buffer += std::to_string(u + 1);
        });
        buffer += '\n';
        out << buffer;
    }
}

void write_metis(const Graph& g, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_metis(g, out);
    if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

nlohmann::json stats_json(const KernelResult& result, const KernelizerConfig& cfg) {
    using nlohmann::json;
    const RunStats& s = result.stats;
    json rules = json::object();
    for (std::size_t r = 0; r < kRuleCount; ++r) {
        rules[std::string(rule_name(static_cast<Rule>(r)))] = s.rules.removed[r];
    }
    json trace = json::array();
    for (const auto& sample : s.size_trace) trace.push_back({sample.seconds, sample.live});

    json toggles = {
        {"degree_two_paths", cfg.reductions.rules.degree_two_paths},
        {"isolated_clique", cfg.reductions.rules.isolated_clique},
        {"fold", cfg.reductions.rules.fold},
        {"twin", cfg.reductions.rules.twin},
        {"unconfined", cfg.reductions.rules.unconfined},
        {"diamond", cfg.reductions.rules.diamond},
        {"linear_program", cfg.reductions.rules.linear_program},
    };
    json config = {
        {"workers", cfg.workers},
        {"blocks", cfg.block_count()},
        {"tracking", cfg.tracking},
        {"tracking_threshold", cfg.tracking_threshold},
        {"sample_interval_ms", static_cast<double>(cfg.sample_interval.count()) / 1000.0},
        {"mode", cfg.mode == KernelMode::Full ? "full" : "quasi"},
        {"seed", cfg.seed},
        {"partition_file", cfg.partition_file ? json(cfg.partition_file->string()) : json(nullptr)},
        {"rules", toggles},
    };
    return json{
        {"input", {{"vertices", s.input_vertices}, {"edges", s.input_edges}}},
        {"kernel", {{"vertices", s.kernel_vertices}, {"edges", s.kernel_edges}}},
        {"offset", result.offset},
        {"is_quasi", result.is_quasi},
        {"preprocessed_vertices", s.preprocessed_vertices},
        {"rounds", s.rounds},
        {"tracking_stops", s.tracking_stops},
        {"cut_edges", s.cut_edges},
        {"blocks", s.blocks},
        {"workers", s.workers},
        {"times",
         {{"preprocess", s.times.preprocess},
          {"partition", s.times.partition},
          {"local", s.times.local},
          {"lp", s.times.lp},
          {"finish", s.times.finish},
          {"total", s.times.total}}},
        {"removed_by_rule", rules},
        {"size_trace", trace},
        {"config", config},
    };
}

void write_kernel(const KernelResult& result, const KernelizerConfig& cfg,
                  const std::filesystem::path& prefix) {
    auto with_suffix = [&](const char* suffix) {
        return std::filesystem::path(prefix.string() + suffix);
    };
    write_metis(result.kernel, with_suffix(".graph"));

    const auto map_path = with_suffix(".map");
    std::ofstream map(map_path);
    if (!map) throw std::runtime_error("cannot write " + map_path.string());
    for (VertexId id : result.vertex_map) map << id << '\n';
    if (!map) throw std::runtime_error("write to " + map_path.string() + " failed");

    const auto stats_path = with_suffix(".stats.json");
    std::ofstream stats(stats_path);
    if (!stats) throw std::runtime_error("cannot write " + stats_path.string());
    stats << stats_json(result, cfg).dump(2) << '\n';
    if (!stats) throw std::runtime_error("write to " + stats_path.string() + " failed");
}

void write_mis(std::span<const VertexId> set, const std::filesystem::path& path) {
    std::vector<VertexId> sorted(set.begin(), set.end());
    std::sort(sorted.begin(), sorted.end());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (VertexId v : sorted) out << v << '\n';
    if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

}  // namespace fastker
