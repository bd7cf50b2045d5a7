#pragma once

#include "dmdplace/beam.hpp"
#include "dmdplace/design_loop.hpp"
#include "dmdplace/types.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>

namespace dmdplace {

/// Whole-experiment configuration; every field carries the default that
/// reproduces the built-in demo scenario, so an empty JSON document is a
/// valid config.
struct ExperimentConfig {
    int     schema_version = 1;
    ModeSet mode_set       = default_mode_table();
    Index   n_nodes        = 51;  // clamped root + 50 candidate nodes
    double  dt             = 1.0 / 4000.0;
    double  t_final        = 2.0;

    Index dmd_stacks = 2;
    Index dmd_rank   = 6;

    Index hankel_depth = 0;  // 0 = from the dominant period

    Index n_sensors   = 2;
    Index truncation  = 6;
    Index decimation  = 16;
    Index lower_bound = 1;  // candidate-index bounds; root node 0 excluded
    Index upper_bound = 0;  // 0 = tip node

    double pair_mass = 0.05;  // modal-mass ratio per sensor/actuator pair
    Index  max_iters = 20;

    double control_weight = 1e-2;
    double horizon        = 10.0;
    double band           = 0.02;

    std::string   output_dir = "out";
    std::uint64_t seed       = 12345;

    Index n_t() const;
    Index upper() const { return upper_bound > 0 ? upper_bound : n_nodes - 1; }

    /// Rejects every downstream precondition violation; throws
    /// std::invalid_argument naming the violated bound.
    void validate() const;

    std::vector<Index> candidate_nodes() const;
    PlacementTemplate  placement_template() const;
    SimulationParams   simulation_params() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json   config_to_json(const ExperimentConfig& config);

/// Loads a JSON config file; an empty path yields the defaults.
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace dmdplace
