#include "dmdplace/pipeline.hpp"

#include "dmdplace/io.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dmdplace {

namespace fs = std::filesystem;

namespace {

std::vector<Index> all_node_indices(Index n_nodes) {
    std::vector<Index> nodes(static_cast<std::size_t>(n_nodes));
    for (Index i = 0; i < n_nodes; ++i) {
        nodes[static_cast<std::size_t>(i)] = i;
    }
    return nodes;
}

std::vector<Index> decimated_times(Index n_t, Index decimation) {
    std::vector<Index> t_indices;
    for (Index t = 1; t <= n_t - 1; t += decimation) {
        t_indices.push_back(t);
    }
    return t_indices;
}

// Dominant conjugate-pair representatives (positive imaginary part), in
// dominance order.
std::vector<Index> dominant_pairs(const DmdModel& model, Index max_pairs) {
    std::vector<Index> pairs;
    for (Index j = 0; j < model.rank && static_cast<Index>(pairs.size()) < max_pairs; ++j) {
        if (model.eigenvalues(j).imag() > 0.0) {
            pairs.push_back(j);
        }
    }
    return pairs;
}

ModalLti plant_for_placement(const ExperimentConfig& config,
                             const std::vector<Index>& placement) {
    const Vector mesh = uniform_mesh(config.n_nodes, config.mode_set.beam_length);
    MassLoad     load;
    for (Index node : placement) {
        load.positions.push_back(mesh(node));
        load.masses.push_back(config.pair_mass);
    }
    const Index n_keep = std::min<Index>(3, config.mode_set.n_modes());
    const CorrectedModes corrected = corrected_modes(config.mode_set, load, n_keep);
    const ModalBasis     basis     = corrected_basis(config.mode_set, corrected, mesh);
    return build_modal_lti(basis, placement, placement, config.dt, n_keep);
}

PlacementResult place_from_model(const ExperimentConfig& config,
                                 const DmdModel& model, Index* depth_out,
                                 Matrix* y_out) {
    const Index n_t = model.V_r.rows() + model.stacks;
    const DmdModel rec_model =
        truncate_model(model, std::min(config.truncation, model.rank));

    const double dt_y = model.dt * static_cast<double>(config.decimation);
    double       f_max = 0.0;
    for (const ContinuousMode& m : continuous_modes(rec_model)) {
        f_max = std::max(f_max, m.freq_hz);
    }
    if (f_max > 0.0 && dt_y >= 0.5 / f_max) {
        throw std::invalid_argument(
            "place: decimation violates the Nyquist bound of the retained modes");
    }

    const Matrix Y = reconstruct(rec_model, decimated_times(n_t, config.decimation),
                                 all_node_indices(model.n_state));
    const Index depth = config.hankel_depth > 0 ? config.hankel_depth
                                                : choose_hankel_depth(Y, dt_y);

    PlacementProblem problem;
    problem.Y            = Y;
    problem.candidates   = config.candidate_nodes();
    problem.n_sensors    = config.n_sensors;
    problem.hankel_depth = depth;
    problem.truncation   = config.truncation;
    problem.lower_bound  = std::max<Index>(1, config.lower_bound);
    problem.upper_bound  = config.upper();
    if (depth_out != nullptr) {
        *depth_out = depth;
    }
    if (y_out != nullptr) {
        *y_out = Y;
    }
    return exhaustive_search(problem);
}

}  // namespace

void run_simulate(const ExperimentConfig& config, const fs::path& out_dir) {
    config.validate();
    const SnapshotData data =
        simulate(config.mode_set, config.n_nodes, config.dt, config.t_final);

    fs::create_directories(out_dir);
    write_text_file(out_dir / "snapshot.csv", snapshot_to_csv(data));

    json meta;
    meta["config"]  = config_to_json(config);
    meta["n_nodes"] = data.n_nodes();
    meta["n_t"]     = data.n_t();
    meta["dt"]      = data.dt;
    write_text_file(out_dir / "simulate_meta.json", meta.dump(2) + "\n");
}

void run_identify(const ExperimentConfig& config, const fs::path& out_dir) {
    config.validate();
    const SnapshotData data =
        snapshot_from_csv(read_text_file(out_dir / "snapshot.csv"));

    const ShiftedSnapshots snap = build_shifted_snapshots(data, config.dmd_stacks);
    const DmdModel         model = fit_dmd(snap, config.dmd_rank);

    write_text_file(out_dir / "dmd_model.json", dmd_model_to_json(model).dump() + "\n");

    // Full singular spectrum of the stacked snapshot matrix.
    Eigen::BDCSVD<Matrix> svd(snap.X);
    const Vector          sigma = svd.singularValues();
    Matrix                spectrum(sigma.size(), 3);
    const double          total = sigma.sum();
    double                running = 0.0;
    for (Index i = 0; i < sigma.size(); ++i) {
        running += sigma(i);
        spectrum(i, 0) = static_cast<double>(i + 1);
        spectrum(i, 1) = sigma(i);
        spectrum(i, 2) = total > 0.0 ? running / total : 0.0;
    }
    write_text_file(out_dir / "svd_spectrum.csv",
                    matrix_to_csv({"index", "sigma", "cumulative_fraction"}, spectrum));

    // Dominant mode shapes against the closed-form shapes, tip-normalized.
    const std::vector<Index> pairs = dominant_pairs(model, 3);
    const Index              tip   = model.n_state - 1;
    {
        Matrix shapes(model.n_state, 1 + 2 * static_cast<Index>(pairs.size()));
        std::vector<std::string> header{"x"};
        shapes.col(0) = data.node_x;
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            const Index j = pairs[p];
            ComplexVector mode = model.modes.col(j).head(model.n_state);
            if (std::abs(mode(tip)) > 0.0) {
                mode /= mode(tip);
            }
            shapes.col(1 + 2 * static_cast<Index>(p)) = mode.real();

            // Label the nearest mode of the configured table by frequency.
            const double f = discrete_to_continuous(model.eigenvalues(j), model.dt).freq_hz;
            Index        nearest = 0;
            for (Index i = 1; i < config.mode_set.n_modes(); ++i) {
                if (std::abs(config.mode_set.modes[static_cast<std::size_t>(i)].freq_hz - f) <
                    std::abs(config.mode_set.modes[static_cast<std::size_t>(nearest)].freq_hz - f)) {
                    nearest = i;
                }
            }
            const ModeSpec& truth = config.mode_set.modes[static_cast<std::size_t>(nearest)];
            const double    truth_tip = mode_shape(truth, 1.0);
            for (Index i = 0; i < model.n_state; ++i) {
                shapes(i, 2 + 2 * static_cast<Index>(p)) =
                    mode_shape(truth, data.node_x(i) / config.mode_set.beam_length) / truth_tip;
            }
            header.push_back("dmd_mode_" + std::to_string(p + 1));
            header.push_back("truth_mode_" + std::to_string(nearest + 1));
        }
        write_text_file(out_dir / "mode_shapes.csv", matrix_to_csv(header, shapes));
    }

    // Tip response: truth against the full-rate reconstruction, t = 1..n_t-1.
    {
        std::vector<Index> t_indices;
        for (Index t = 1; t <= data.n_t() - 1; ++t) {
            t_indices.push_back(t);
        }
        const Matrix tip_rec = reconstruct(model, t_indices, {tip});
        Matrix       table(static_cast<Index>(t_indices.size()), 3);
        for (Index k = 0; k < table.rows(); ++k) {
            table(k, 0) = static_cast<double>(t_indices[static_cast<std::size_t>(k)] - 1) * data.dt;
            table(k, 1) = data.values(tip, t_indices[static_cast<std::size_t>(k)] - 1);
            table(k, 2) = tip_rec(0, k);
        }
        write_text_file(out_dir / "tip_reconstruction.csv",
                        matrix_to_csv({"t", "truth_tip", "dmd_tip"}, table));

        const MagnitudeSpectrum truth_spec =
            magnitude_spectrum(table.col(1), data.dt);
        const MagnitudeSpectrum dmd_spec = magnitude_spectrum(table.col(2), data.dt);
        Matrix fft_table(truth_spec.freq_hz.size(), 3);
        fft_table.col(0) = truth_spec.freq_hz;
        fft_table.col(1) = truth_spec.magnitude;
        fft_table.col(2) = dmd_spec.magnitude;
        write_text_file(out_dir / "fft_comparison.csv",
                        matrix_to_csv({"freq_hz", "truth_tip", "dmd_tip"}, fft_table));
    }

    json meta;
    meta["rank"]   = model.rank;
    meta["stacks"] = model.stacks;
    meta["energy_fraction_at_rank"] = energy_fraction(sigma, model.rank);
    json recovered = json::array();
    for (Index j : pairs) {
        const ContinuousMode m = discrete_to_continuous(model.eigenvalues(j), model.dt);
        recovered.push_back({{"freq_hz", m.freq_hz}, {"zeta", m.zeta}});
    }
    meta["recovered_modes"] = std::move(recovered);
    write_text_file(out_dir / "identify_meta.json", meta.dump(2) + "\n");
}

void run_place(const ExperimentConfig& config, const fs::path& out_dir) {
    config.validate();
    const DmdModel model =
        dmd_model_from_json(json::parse(read_text_file(out_dir / "dmd_model.json")));

    Index                 depth = 0;
    const PlacementResult result = place_from_model(config, model, &depth, nullptr);

    write_text_file(out_dir / "landscape.csv", landscape_to_csv(result.landscape));

    json j          = placement_result_to_json(result);
    j["depth"]      = depth;
    j["decimation"] = config.decimation;
    write_text_file(out_dir / "placement.json", j.dump(2) + "\n");
}

void run_iterate(const ExperimentConfig& config, const fs::path& out_dir) {
    config.validate();
    const DesignResult result =
        run_design_loop(config.mode_set, config.pair_mass, config.placement_template(),
                        config.simulation_params(), config.max_iters);

    fs::create_directories(out_dir);
    write_text_file(out_dir / "loop_history.json",
                    design_result_to_json(result).dump(2) + "\n");
    write_text_file(out_dir / "landscape_loaded.csv",
                    landscape_to_csv(result.final_landscape));
}

void run_evaluate(const ExperimentConfig& config, const fs::path& out_dir) {
    config.validate();
    const json loop = json::parse(read_text_file(out_dir / "loop_history.json"));

    const std::vector<Index> naive =
        loop.at("iterations").at(0).at("placement").get<std::vector<Index>>();
    const std::vector<Index> final_placement =
        loop.at("final_placement").get<std::vector<Index>>();

    const ModalLti optimal    = plant_for_placement(config, final_placement);
    const ModalLti suboptimal = plant_for_placement(config, naive);

    Vector x0 = Vector::Zero(optimal.sys.order());
    for (Index i = 0; i < optimal.n_modes; ++i) {
        x0(2 * i) = config.mode_set.modes[static_cast<std::size_t>(i)].amplitude;
    }

    EvalSettings settings;
    settings.control_weight = config.control_weight;
    settings.horizon        = config.horizon;
    settings.band           = config.band;

    Trajectory opt_traj, sub_traj, open_traj;
    const MetricReport report = compare_configs(optimal, suboptimal, x0, settings,
                                                &opt_traj, &sub_traj, &open_traj);

    json j                   = metric_report_to_json(report);
    j["optimal_placement"]   = final_placement;
    j["suboptimal_placement"] = naive;
    write_text_file(out_dir / "control_metrics.json", j.dump(2) + "\n");
    write_text_file(out_dir / "control_metrics.txt", metric_report_to_text(report));

    // Trajectories and per-channel PSDs for plotting.
    {
        const Index p = opt_traj.y.rows();
        const Index m = opt_traj.u.rows();
        Matrix      table(opt_traj.t.size(), 1 + 3 * p + 2 * m);
        std::vector<std::string> header{"t"};
        table.col(0) = opt_traj.t;
        Index col    = 1;
        auto append_y = [&](const char* tag, const Trajectory& traj) {
            for (Index c = 0; c < p; ++c) {
                table.col(col) = traj.y.row(c).transpose();
                header.push_back(std::string(tag) + "_y" + std::to_string(c + 1));
                ++col;
            }
        };
        auto append_u = [&](const char* tag, const Trajectory& traj) {
            for (Index c = 0; c < m; ++c) {
                table.col(col) = traj.u.row(c).transpose();
                header.push_back(std::string(tag) + "_u" + std::to_string(c + 1));
                ++col;
            }
        };
        append_y("open", open_traj);
        append_y("suboptimal", sub_traj);
        append_y("optimal", opt_traj);
        append_u("suboptimal", sub_traj);
        append_u("optimal", opt_traj);
        write_text_file(out_dir / "trajectories.csv", matrix_to_csv(header, table));
    }
    {
        const Index p = opt_traj.y.rows();
        std::vector<PsdEstimate> psds;
        std::vector<std::string> header{"freq_hz"};
        for (const auto& [tag, traj] :
             std::vector<std::pair<std::string, const Trajectory*>>{
                 {"open", &open_traj}, {"suboptimal", &sub_traj}, {"optimal", &opt_traj}}) {
            for (Index c = 0; c < p; ++c) {
                psds.push_back(welch_psd(traj->y.row(c).transpose(), config.dt));
                header.push_back(tag + "_y" + std::to_string(c + 1));
            }
        }
        Matrix table(psds.front().freq_hz.size(), 1 + static_cast<Index>(psds.size()));
        table.col(0) = psds.front().freq_hz;
        for (std::size_t i = 0; i < psds.size(); ++i) {
            table.col(1 + static_cast<Index>(i)) = psds[i].psd;
        }
        write_text_file(out_dir / "psd.csv", matrix_to_csv(header, table));
    }
}

void run_pipeline(const ExperimentConfig& config, const fs::path& out_dir) {
    run_simulate(config, out_dir);
    run_identify(config, out_dir);
    run_place(config, out_dir);
    run_iterate(config, out_dir);
    run_evaluate(config, out_dir);
}

void run_verify_gramian(const ExperimentConfig& config, const fs::path& out_dir,
                        Index trials, double tol) {
    const EquivalenceSummary summary =
        run_equivalence_trials(trials, 6, tol, config.seed);

    fs::create_directories(out_dir);
    write_text_file(out_dir / "gramian_equivalence.json",
                    equivalence_summary_to_json(summary).dump(2) + "\n");
    if (!summary.pass) {
        throw std::runtime_error(
            "verify-gramian: spectrum equivalence failed, worst deviation " +
            format_g17(summary.worst_dev));
    }
}

}  // namespace dmdplace
