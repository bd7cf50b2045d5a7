#include "dmdplace/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

namespace {

struct CliOptions {
    std::string   config_path;
    std::string   out_dir;
    bool          seed_set      = false;
    std::uint64_t seed          = 0;
    bool          max_iters_set = false;
    long long     max_iters     = 0;
    bool          pair_mass_set = false;
    double        pair_mass     = 0.0;
    long long     trials        = 100;
    double        tol           = 1e-8;
};

dmdplace::ExperimentConfig make_config(const CliOptions& opts) {
    dmdplace::ExperimentConfig config = dmdplace::load_config(opts.config_path);
    if (opts.seed_set) {
        config.seed = opts.seed;
    }
    if (opts.max_iters_set) {
        config.max_iters = static_cast<dmdplace::Index>(opts.max_iters);
    }
    if (opts.pair_mass_set) {
        config.pair_mass = opts.pair_mass;
    }
    if (!opts.out_dir.empty()) {
        config.output_dir = opts.out_dir;
    }
    config.validate();
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Data-driven surrogate modeling and sensor/actuator placement "
                 "for a flexible cantilever structure"};
    app.require_subcommand(1);

    CliOptions opts;
    app.add_option("--config", opts.config_path, "JSON config file (defaults used when absent)");
    app.add_option("--out", opts.out_dir, "Output directory (overrides config)");
    app.add_option("--seed", opts.seed, "Random seed for verification trials")
        ->each([&](const std::string&) { opts.seed_set = true; });
    app.add_option("--max-iters", opts.max_iters, "Design-loop iteration cap")
        ->each([&](const std::string&) { opts.max_iters_set = true; });
    app.add_option("--pair-mass", opts.pair_mass, "Sensor/actuator pair mass ratio")
        ->each([&](const std::string&) { opts.pair_mass_set = true; });

    auto* simulate = app.add_subcommand("simulate", "Generate truth snapshot data");
    auto* identify = app.add_subcommand("identify", "Fit the reduced model to snapshot data");
    auto* place    = app.add_subcommand("place", "Exhaustive sensor/actuator pair search");
    auto* iterate  = app.add_subcommand("iterate", "Mass-aware iterative placement loop");
    auto* evaluate = app.add_subcommand("evaluate", "LQR vibration-suppression comparison");
    auto* pipeline = app.add_subcommand("pipeline", "Run every stage in order");
    auto* verify   = app.add_subcommand("verify-gramian",
                                        "Randomized Hankel/Gramian spectrum equivalence suite");
    verify->add_option("--trials", opts.trials, "Number of randomized systems");
    verify->add_option("--tol", opts.tol, "Relative deviation tolerance");

    CLI11_PARSE(app, argc, argv);

    try {
        const dmdplace::ExperimentConfig config = make_config(opts);
        const std::filesystem::path     out    = config.output_dir;

        if (simulate->parsed()) {
            dmdplace::run_simulate(config, out);
        } else if (identify->parsed()) {
            dmdplace::run_identify(config, out);
        } else if (place->parsed()) {
            dmdplace::run_place(config, out);
        } else if (iterate->parsed()) {
            dmdplace::run_iterate(config, out);
        } else if (evaluate->parsed()) {
            dmdplace::run_evaluate(config, out);
        } else if (pipeline->parsed()) {
            dmdplace::run_pipeline(config, out);
        } else if (verify->parsed()) {
            dmdplace::run_verify_gramian(config, out,
                                         static_cast<dmdplace::Index>(opts.trials), opts.tol);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
