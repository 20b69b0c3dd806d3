// Serial vs parallel timings for the matching kernel and the whole kernelizer.
#include <chrono>
#include <cstdio>
#include <vector>

#include <CLI11.hpp>
#include <omp.h>

#include "fastker/generators.hpp"
#include "fastker/kernelizer.hpp"
#include "fastker/lp_reduction.hpp"
#include "fastker/matching.hpp"

using namespace fastker;

namespace {

template <class F>
double seconds(F&& f) {
    const auto start = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fastker benchmarks"};
    std::size_t n = 200000;
    double degree = 17.0;
    std::uint64_t seed = 1;
    std::vector<int> threads{1, 2, 4, 8};
    app.add_option("--n", n, "vertices of the random geometric graph");
    app.add_option("--degree", degree, "average degree");
    app.add_option("--seed", seed);
    app.add_option("--threads", threads, "worker counts to compare");
    CLI11_PARSE(app, argc, argv);

    std::printf("hardware threads: %d\n", omp_get_num_procs());
    Graph g;
    const double gen = seconds([&] { g = random_geometric(n, degree, seed); });
    std::printf("rgg n=%zu m=%zu generated in %.2f s\n", g.live_count(), g.live_edge_count(), gen);

    const auto bd = BiDoubleGraph::build(g);
    {
        Matching start;
        karp_sipser(bd, start, seed);
        Matching serial = start;
        const double t = seconds([&] { hopcroft_karp(bd, serial); });
        std::printf("matching  hopcroft-karp (serial)          %8.3f s  size %zu\n", t,
                    serial.size());
        for (int w : threads) {
            omp_set_num_threads(w);
            Matching par = start;
            const double tp = seconds([&] { augment_parallel(bd, par); });
            std::printf("matching  parallel augmentation %2d thr    %8.3f s  size %zu\n", w, tp,
                        par.size());
        }
    }

    double base = 0.0;
    for (int w : threads) {
        KernelizerConfig cfg;
        cfg.workers = w;
        cfg.seed = seed;
        KernelResult r;
        const double t = seconds([&] { r = kernelize(g, cfg); });
        if (w == threads.front()) base = t;
        std::printf(
            "kernelize %2d workers  %8.3f s  kernel %zu  offset %lld  rounds %d  tracking stops %d"
            "  (local %.2f s, lp %.2f s)  speedup %.2f\n",
            w, t, r.stats.kernel_vertices, static_cast<long long>(r.offset), r.stats.rounds,
            r.stats.tracking_stops, r.stats.times.local, r.stats.times.lp, base / t);
        std::fflush(stdout);
    }
    return 0;
}
