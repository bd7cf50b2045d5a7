#pragma once

#include "dmdplace/config.hpp"

#include <filesystem>

namespace dmdplace {

/// Each stage reads its upstream artifacts from `out_dir` and writes its own
/// there, so running the stages one by one reproduces the `run_pipeline`
/// bundle byte for byte.
///
/// Artifacts:
///   simulate  -> snapshot.csv, simulate_meta.json
///   identify  -> dmd_model.json, svd_spectrum.csv, mode_shapes.csv,
///                tip_reconstruction.csv, fft_comparison.csv, identify_meta.json
///   place     -> landscape.csv, placement.json
///   iterate   -> loop_history.json, landscape_loaded.csv
///   evaluate  -> control_metrics.json, control_metrics.txt,
///                trajectories.csv, psd.csv
void run_simulate(const ExperimentConfig& config, const std::filesystem::path& out_dir);
void run_identify(const ExperimentConfig& config, const std::filesystem::path& out_dir);
void run_place(const ExperimentConfig& config, const std::filesystem::path& out_dir);
void run_iterate(const ExperimentConfig& config, const std::filesystem::path& out_dir);
void run_evaluate(const ExperimentConfig& config, const std::filesystem::path& out_dir);
void run_pipeline(const ExperimentConfig& config, const std::filesystem::path& out_dir);

/// Randomized Hankel/Gramian spectrum-equivalence suite; writes
/// gramian_equivalence.json and throws when a trial fails.
void run_verify_gramian(const ExperimentConfig& config,
                        const std::filesystem::path& out_dir, Index trials,
                        double tol);

}  // namespace dmdplace
