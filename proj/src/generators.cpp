#include "fastker/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fastker {

Graph random_gnp(std::size_t n, double p, std::mt19937_64& rng) {
    std::vector<Edge> edges;
    if (p <= 0.0 || n < 2) return Graph::from_edges(n, edges);
    if (p >= 1.0) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) edges.push_back({VertexId(i), VertexId(j)});
        return Graph::from_edges(n, edges);
    }
    // Geometric skipping over the upper triangle, so sparse graphs cost O(n + m).
    std::geometric_distribution<std::int64_t> skip(p);
    const auto total = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;
    std::int64_t row = 0, row_start = 0;
    for (std::int64_t idx = skip(rng); idx < total; idx += 1 + skip(rng)) {
        // Row r holds the pairs (r, r+1..n-1).
        while (idx >= row_start + static_cast<std::int64_t>(n) - 1 - row) {
            row_start += static_cast<std::int64_t>(n) - 1 - row;
            ++row;
        }
        const std::int64_t col = row + 1 + (idx - row_start);
        edges.push_back({static_cast<VertexId>(row), static_cast<VertexId>(col)});
    }
    return Graph::from_edges(n, edges);
}

Graph random_geometric(std::size_t n, double avg_degree, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = unit(rng);
        y[i] = unit(rng);
    }
    const double r = std::sqrt(avg_degree / (static_cast<double>(std::max<std::size_t>(n, 1)) * std::numbers::pi));
    const auto cells = static_cast<std::size_t>(std::max(1.0, std::floor(1.0 / r)));
    auto cell_of = [&](double c) {
        return std::min(cells - 1, static_cast<std::size_t>(c * static_cast<double>(cells)));
    };
    std::vector<std::vector<VertexId>> grid(cells * cells);
    for (std::size_t i = 0; i < n; ++i) grid[cell_of(x[i]) * cells + cell_of(y[i])].push_back(VertexId(i));

    std::vector<std::vector<VertexId>> adjacency(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto cx = static_cast<std::int64_t>(cell_of(x[i]));
        const auto cy = static_cast<std::int64_t>(cell_of(y[i]));
        const auto c = static_cast<std::int64_t>(cells);
        for (std::int64_t gx = std::max<std::int64_t>(cx - 1, 0); gx <= std::min(cx + 1, c - 1); ++gx) {
            for (std::int64_t gy = std::max<std::int64_t>(cy - 1, 0); gy <= std::min(cy + 1, c - 1); ++gy) {
                for (VertexId j : grid[static_cast<std::size_t>(gx * c + gy)]) {
                    if (j == VertexId(i)) continue;
                    const double dx = x[i] - x[j], dy = y[i] - y[j];
                    if (dx * dx + dy * dy <= r * r) adjacency[i].push_back(j);
                }
            }
        }
    }
    return Graph::from_adjacency(std::move(adjacency));
}

}  // namespace fastker
