#include "dmdplace/design_loop.hpp"

#include "dmdplace/hankel.hpp"
#include "dmdplace/mass_correction.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace dmdplace {

PlacementPass place_from_snapshots(const SnapshotData& data,
                                   const PlacementTemplate& tmpl) {
    if (tmpl.decimation < 1) {
        throw std::invalid_argument("place_from_snapshots: decimation must be >= 1");
    }

    PlacementPass pass;
    pass.model = fit_dmd(build_shifted_snapshots(data, tmpl.dmd_stacks),
                         tmpl.dmd_rank);

    // The decimated rate must still resolve every retained mode.
    pass.dt_y = data.dt * static_cast<double>(tmpl.decimation);
    double f_max = 0.0;
    for (const ContinuousMode& m : continuous_modes(pass.model)) {
        f_max = std::max(f_max, m.freq_hz);
    }
    if (f_max > 0.0 && pass.dt_y >= 0.5 / f_max) {
        throw std::invalid_argument(
            "place_from_snapshots: decimation violates the Nyquist bound of the retained modes");
    }

    std::vector<Index> t_indices;
    for (Index t = 1; t <= data.n_t() - 1; t += tmpl.decimation) {
        t_indices.push_back(t);
    }
    std::vector<Index> all_nodes(static_cast<std::size_t>(data.n_nodes()));
    for (Index i = 0; i < data.n_nodes(); ++i) {
        all_nodes[static_cast<std::size_t>(i)] = i;
    }
    // The placement stage sees only the dominant modes retained by the cost.
    const DmdModel rec_model =
        truncate_model(pass.model, std::min(tmpl.truncation, pass.model.rank));
    pass.Y = reconstruct(rec_model, t_indices, all_nodes);

    pass.depth = tmpl.hankel_depth > 0 ? tmpl.hankel_depth
                                       : choose_hankel_depth(pass.Y, pass.dt_y);

    PlacementProblem problem;
    problem.Y            = pass.Y;
    problem.candidates   = tmpl.candidates;
    problem.n_sensors    = tmpl.n_sensors;
    problem.hankel_depth = pass.depth;
    problem.truncation   = tmpl.truncation;
    problem.lower_bound  = tmpl.lower_bound;
    problem.upper_bound  = tmpl.upper_bound;
    pass.result          = exhaustive_search(problem);
    return pass;
}

DesignResult run_design_loop(const ModeSet& set, double pair_mass,
                             const PlacementTemplate& tmpl,
                             const SimulationParams& sim, Index max_iters) {
    if (max_iters < 1) {
        throw std::invalid_argument("run_design_loop: max_iters must be >= 1");
    }
    if (!(pair_mass >= 0.0)) {
        throw std::invalid_argument("run_design_loop: pair mass must be >= 0");
    }
    set.validate();

    const Vector mesh = uniform_mesh(sim.n_nodes, set.beam_length);

    DesignResult out;

    // Iteration 0: the unloaded beam fixes the starting placement.
    const SnapshotData unloaded = simulate(set, sim.n_nodes, sim.dt, sim.t_final);
    PlacementPass      pass     = place_from_snapshots(unloaded, tmpl);

    DesignIteration first;
    first.index     = 0;
    first.placement = pass.result.best_subset;
    first.cost      = pass.result.best_cost;
    first.corrected_freq_hz.resize(set.n_modes());
    for (Index i = 0; i < set.n_modes(); ++i) {
        first.corrected_freq_hz(i) = set.modes[static_cast<std::size_t>(i)].freq_hz;
    }
    first.dmd_rank    = pass.model.rank;
    first.eigenvalues = pass.model.eigenvalues;
    out.history.push_back(first);
    out.final_placement = first.placement;
    out.final_landscape = pass.result.landscape;

    std::set<std::vector<Index>> visited;
    visited.insert(first.placement);

    for (Index k = 1; k <= max_iters; ++k) {
        const std::vector<Index>& current = out.history.back().placement;

        MassLoad load;
        for (Index node : current) {
            load.positions.push_back(mesh(node));
            load.masses.push_back(pair_mass);
        }
        const CorrectedModes corrected = corrected_modes(set, load, 3);
        const ModalBasis     basis     = corrected_basis(set, corrected, mesh);
        const SnapshotData   loaded    = synthesize(basis, mesh, sim.dt, sim.t_final);

        pass = place_from_snapshots(loaded, tmpl);

        DesignIteration iter;
        iter.index             = k;
        iter.placement         = pass.result.best_subset;
        iter.cost              = pass.result.best_cost;
        iter.corrected_freq_hz = corrected.corrected_freq_hz;
        iter.dmd_rank          = pass.model.rank;
        iter.eigenvalues       = pass.model.eigenvalues;
        out.history.push_back(iter);
        out.final_placement = iter.placement;
        out.final_landscape = pass.result.landscape;

        if (iter.placement == current) {
            out.converged = true;
            break;
        }
        if (visited.count(iter.placement) > 0) {
            out.cycle_detected = true;
            break;
        }
        visited.insert(iter.placement);
    }
    return out;
}

}  // namespace dmdplace
