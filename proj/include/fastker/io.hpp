#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include <json.hpp>

#include "fastker/graph.hpp"
#include "fastker/kernelizer.hpp"

namespace fastker {

/// Reads a METIS graph. Bodies are 1-indexed; every edge must be listed from both
/// sides. Weight formats are accepted and the weights ignored.
Graph read_metis(const std::filesystem::path& path);
/// `source` names the stream in error messages.
Graph parse_metis(std::istream& in, const std::string& source = "<stream>");

/// Writes the live part of `g`, renumbered densely, as METIS.
void write_metis(const Graph& g, std::ostream& out);
void write_metis(const Graph& g, const std::filesystem::path& path);

nlohmann::json stats_json(const KernelResult& result, const KernelizerConfig& cfg);

/// `<prefix>.graph`, `<prefix>.map` (working id per kernel vertex) and
/// `<prefix>.stats.json`. Throws std::runtime_error when a file cannot be written.
void write_kernel(const KernelResult& result, const KernelizerConfig& cfg,
                  const std::filesystem::path& prefix);

/// Sorted ids, one per line.
void write_mis(std::span<const VertexId> set, const std::filesystem::path& path);

int cli_main(int argc, char** argv);

}  // namespace fastker
