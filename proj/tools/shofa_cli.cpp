// Command-line sweep runner: reads a key=value config with an optional sweep
// axis, runs the seeded trials, and emits one CSV row per grid point.
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "shofa/harness.hpp"

int main(int argc, char** argv) {
    CLI::App app{"sparse-recovery experiment sweeps"};

    std::string config_path;
    std::string out_path;
    unsigned threads = 1;
    std::optional<std::uint64_t> seed_override;

    app.add_option("--config", config_path, "config file (key = value, one sweep axis)")
        ->required();
    app.add_option("--out", out_path, "output CSV path (stdout when omitted)");
    app.add_option("--threads", threads, "trial-level worker threads")->default_val(1u);
    app.add_option("--seed", seed_override, "override the config seed");

    CLI11_PARSE(app, argc, argv);

    try {
        shofa::SweepSpec spec = shofa::load_config(config_path);
        if (seed_override)
            for (auto& cfg : spec.grid) cfg.seed = *seed_override;

        std::vector<shofa::SweepResult> results;
        if (spec.bisect_target > 0.0) {
            // Per grid point: find the minimal total-row count reaching the
            // target success fraction, then report the stats at that size.
            for (const auto& cfg : spec.grid) {
                const std::size_t m = shofa::bisect_min_rows(cfg, spec.bisect_target,
                                                             spec.bisect_lo, spec.bisect_hi,
                                                             threads);
                shofa::TrialConfig at = cfg;
                if (m > spec.bisect_hi) {
                    std::cerr << "bisect: target " << spec.bisect_target
                              << " unreachable within [" << spec.bisect_lo << ", "
                              << spec.bisect_hi << "] at n=" << cfg.n << "\n";
                    at.set_rows(spec.bisect_hi);
                } else {
                    at.set_rows(m);
                }
                results.push_back(shofa::run_grid_point(at, threads));
            }
        } else {
            results = shofa::sweep(spec.grid, threads);
        }

        if (out_path.empty()) {
            shofa::write_csv(std::cout, results);
        } else {
            std::ofstream os(out_path);
            if (!os) {
                std::cerr << "cannot open output path: " << out_path << "\n";
                return 1;
            }
            shofa::write_csv(os, results);
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
