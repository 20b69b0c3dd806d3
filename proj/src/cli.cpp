#include <iostream>

#include <CLI11.hpp>

#include "fastker/errors.hpp"
#include "fastker/io.hpp"
#include "fastker/oracle.hpp"
#include "fastker/restore.hpp"

namespace fastker {

namespace {

constexpr int kExitMalformed = 2;
constexpr int kExitInvariant = 3;
constexpr int kExitUsage = 64;

struct Options {
    std::filesystem::path input;
    std::string output;
    std::string partition_file;
    std::string mode = "quasi";
    int threads = 1;
    int blocks = 0;
    double tracking_threshold = 0.05;
    double sample_interval_ms = 10.0;
    std::uint64_t seed = 0;
    bool solve_exact = false;
    bool no_tracking = false;
    bool quiet = false;
    RuleToggles disabled{false, false, false, false, false, false, false};
};

KernelizerConfig to_config(const Options& o) {
    KernelizerConfig cfg;
    cfg.workers = o.threads;
    cfg.blocks = o.blocks;
    cfg.tracking = !o.no_tracking;
    cfg.tracking_threshold = o.tracking_threshold;
    if (!(o.sample_interval_ms > 0.0)) throw UsageError("--sample-interval-ms must be positive");
    cfg.sample_interval =
        std::chrono::microseconds(static_cast<std::int64_t>(o.sample_interval_ms * 1000.0));
    if (cfg.sample_interval.count() == 0) cfg.sample_interval = std::chrono::microseconds(1);
    cfg.mode = o.mode == "full" ? KernelMode::Full : KernelMode::Quasi;
    cfg.seed = o.seed;
    if (!o.partition_file.empty()) cfg.partition_file = o.partition_file;
    auto& r = cfg.reductions.rules;
    r.degree_two_paths = !o.disabled.degree_two_paths;
    r.isolated_clique = !o.disabled.isolated_clique;
    r.fold = !o.disabled.fold;
    r.twin = !o.disabled.twin;
    r.unconfined = !o.disabled.unconfined;
    r.diamond = !o.disabled.diamond;
    r.linear_program = !o.disabled.linear_program;
    cfg.validate();
    return cfg;
}

std::filesystem::path default_prefix(const std::filesystem::path& input) {
    auto p = input;
    p.replace_extension();
    return p.string() + ".kernel";
}

int run(const Options& o) {
    const KernelizerConfig cfg = to_config(o);
    Graph input = read_metis(o.input);
    const Graph original = o.solve_exact ? input : Graph();
    KernelResult result = kernelize(std::move(input), cfg);

    const std::filesystem::path prefix =
        o.output.empty() ? default_prefix(o.input) : std::filesystem::path(o.output);
    write_kernel(result, cfg, prefix);
    if (!o.quiet) {
        std::cout << "kernel " << result.stats.kernel_vertices << " vertices, "
                  << result.stats.kernel_edges << " edges, offset " << result.offset << ", "
                  << (result.is_quasi ? "quasi" : "full") << " kernel in "
                  << result.stats.times.total << " s\n";
    }

    if (o.solve_exact) {
        if (result.kernel.live_count() > kBruteForceLimit) {
            std::cerr << "kernel has " << result.kernel.live_count() << " vertices, more than "
                      << kBruteForceLimit << "; skipping the exact solve\n";
            return 0;
        }
        const auto kernel_mis = brute_force_mis(result.kernel);
        const auto lifted = undo_all(result.log, result.kernel, kernel_mis.set, result.vertex_map,
                                     result.working_ids);
        if (!validate_independent(original, lifted)) {
            throw InvariantViolation("lifted set is not independent in the input graph");
        }
        const auto expected = static_cast<std::size_t>(result.offset) + kernel_mis.size;
        if (lifted.size() != expected) {
            throw InvariantViolation("lifted set has " + std::to_string(lifted.size()) +
                                     " vertices, expected offset + MIS(kernel) = " +
                                     std::to_string(expected));
        }
        write_mis(lifted, prefix.string() + ".mis");
        if (!o.quiet) std::cout << "independent set of size " << lifted.size() << '\n';
    }
    return 0;
}

}  // namespace

int cli_main(int argc, char** argv) {
    CLI::App app{"Parallel kernelization for maximum independent set"};
    Options o;
    app.add_option("--input", o.input, "METIS graph file")->required();
    app.add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--blocks", o.blocks, "number of blocks (default: threads)")
        ->check(CLI::PositiveNumber);
    app.add_option("--partition-file", o.partition_file, "one block id per vertex line");
    app.add_option("--mode", o.mode, "quasi or full")->check(CLI::IsMember({"quasi", "full"}));
    app.add_option("--tracking-threshold", o.tracking_threshold,
                   "stop a local phase when the recent rate falls below this share of the average");
    app.add_option("--sample-interval-ms", o.sample_interval_ms, "tracking sample interval");
    app.add_option("--seed", o.seed, "random seed");
    app.add_option("--output", o.output, "output prefix (default: input name + .kernel)");
    app.add_flag("--solve-exact", o.solve_exact,
                 "brute-force kernels of at most 40 vertices and write <prefix>.mis");
    app.add_flag("--no-tracking", o.no_tracking, "run local phases to exhaustion");
    app.add_flag("--quiet", o.quiet, "no summary on stdout");
    app.add_flag("--disable-degree-two-paths,--disable-linear-time", o.disabled.degree_two_paths,
                 "skip degree-two path preprocessing");
    app.add_flag("--disable-isolated-clique", o.disabled.isolated_clique);
    app.add_flag("--disable-fold", o.disabled.fold);
    app.add_flag("--disable-twin", o.disabled.twin);
    app.add_flag("--disable-unconfined", o.disabled.unconfined);
    app.add_flag("--disable-diamond", o.disabled.diamond);
    app.add_flag("--disable-lp", o.disabled.linear_program);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return kExitUsage;
    }

    try {
        return run(o);
    } catch (const MalformedInput& e) {
        std::cerr << "malformed input: " << e.what() << '\n';
        return kExitMalformed;
    } catch (const InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << '\n';
        return kExitInvariant;
    } catch (const UsageError& e) {
        std::cerr << "usage: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace fastker
