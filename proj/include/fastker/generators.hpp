#pragma once

#include <cstdint>
#include <random>

#include "fastker/graph.hpp"

namespace fastker {

/// Erdos-Renyi G(n, p).
Graph random_gnp(std::size_t n, double p, std::mt19937_64& rng);

/// Random geometric graph in the unit square; the radius is chosen so the expected
/// average degree is `avg_degree`. Grid bucketing keeps generation near linear.
Graph random_geometric(std::size_t n, double avg_degree, std::uint64_t seed);

}  // namespace fastker
