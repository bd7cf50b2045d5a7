#include "dmdplace/design_loop.hpp"

#include "dmdplace/mass_correction.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace dmdplace;

namespace {

// Three-mode beam on a coarse mesh keeps each loop iteration cheap.
ModeSet toy_modes() {
    ModeSet set;
    set.modes = {
        {1.8751, 0.800, 3.58, 0.01},
        {4.6941, 0.500, 22.45, 0.03},
        {7.8548, 0.100, 62.85, 0.04},
    };
    return set;
}

SimulationParams toy_sim() {
    SimulationParams sim;
    sim.n_nodes = 9;
    sim.dt      = 1.0 / 500.0;
    sim.t_final = 1.0;
    return sim;
}

PlacementTemplate toy_template(Index n_nodes) {
    PlacementTemplate tmpl;
    for (Index i = 1; i < n_nodes; ++i) {
        tmpl.candidates.push_back(i);
    }
    tmpl.n_sensors    = 2;
    tmpl.truncation   = 6;
    tmpl.hankel_depth = 0;
    tmpl.lower_bound  = 1;
    tmpl.upper_bound  = n_nodes - 1;
    tmpl.decimation   = 2;
    tmpl.dmd_stacks   = 2;
    tmpl.dmd_rank     = 6;
    return tmpl;
}

// Placement computed for the beam loaded at `placement`, one step of the
// loop body, used as an independent fixed-point probe.
std::vector<Index> placement_under_load(const ModeSet& set, double pair_mass,
                                        const PlacementTemplate& tmpl,
                                        const SimulationParams& sim,
                                        const std::vector<Index>& placement) {
    const Vector mesh = uniform_mesh(sim.n_nodes, set.beam_length);
    MassLoad     load;
    for (Index node : placement) {
        load.positions.push_back(mesh(node));
        load.masses.push_back(pair_mass);
    }
    const CorrectedModes corrected = corrected_modes(set, load, 3);
    const SnapshotData   data =
        synthesize(corrected_basis(set, corrected, mesh), mesh, sim.dt, sim.t_final);
    return place_from_snapshots(data, tmpl).result.best_subset;
}

}  // namespace

TEST_CASE("zero pair mass converges after one re-check") {
    const ModeSet          set  = toy_modes();
    const SimulationParams sim  = toy_sim();
    const PlacementTemplate tmpl = toy_template(sim.n_nodes);

    const DesignResult result = run_design_loop(set, 0.0, tmpl, sim, 20);
    CHECK(result.converged);
    CHECK(!result.cycle_detected);
    CHECK(result.history.size() == 2);
    CHECK(result.history[1].placement == result.history[0].placement);
    CHECK(result.final_placement == result.history[0].placement);
    for (const DesignIteration& it : result.history) {
        CHECK(std::isfinite(it.cost));
    }
}

TEST_CASE("zero pair mass keeps the mode table unchanged in the audit trail") {
    const ModeSet      set    = toy_modes();
    const DesignResult result =
        run_design_loop(set, 0.0, toy_template(9), toy_sim(), 20);
    REQUIRE(result.history.size() == 2);
    for (Index i = 0; i < set.n_modes(); ++i) {
        CHECK(result.history[1].corrected_freq_hz(i) ==
              set.modes[static_cast<std::size_t>(i)].freq_hz);
    }
}

TEST_CASE("two-candidate beam is a trivial fixed point") {
    const ModeSet    set = toy_modes();
    SimulationParams sim = toy_sim();
    sim.n_nodes          = 3;  // root + two candidates

    const DesignResult result =
        run_design_loop(set, 0.05, toy_template(sim.n_nodes), sim, 20);
    CHECK(result.converged);
    CHECK(result.final_placement == std::vector<Index>{1, 2});
    CHECK(result.history.size() == 2);
}

TEST_CASE("a converged placement is a fixed point of the loop body") {
    const ModeSet           set  = toy_modes();
    const SimulationParams  sim  = toy_sim();
    const PlacementTemplate tmpl = toy_template(sim.n_nodes);
    const double            mass = 0.05;

    const DesignResult result = run_design_loop(set, mass, tmpl, sim, 20);
    if (result.converged) {
        const std::vector<Index> again =
            placement_under_load(set, mass, tmpl, sim, result.final_placement);
        CHECK(again == result.final_placement);
    }
    CHECK(result.history.size() >= 2);
}

TEST_CASE("loop terminates for any pair mass") {
    std::mt19937_64 rng(60301);
    std::uniform_real_distribution<double> mass(0.0, 0.4);
    const ModeSet           set  = toy_modes();
    const SimulationParams  sim  = toy_sim();
    const PlacementTemplate tmpl = toy_template(sim.n_nodes);

    for (int trial = 0; trial < 10; ++trial) {
        const Index        cap    = 6;
        const DesignResult result = run_design_loop(set, mass(rng), tmpl, sim, cap);
        CHECK(result.history.size() <= static_cast<std::size_t>(cap) + 1);
        if (result.converged) {
            CHECK(result.history.back().placement ==
                  result.history[result.history.size() - 2].placement);
            for (const DesignIteration& it : result.history) {
                CHECK(std::isfinite(it.cost));
            }
        }
    }
}

TEST_CASE("loop history records iteration indices in order") {
    const DesignResult result =
        run_design_loop(toy_modes(), 0.1, toy_template(9), toy_sim(), 8);
    for (std::size_t i = 0; i < result.history.size(); ++i) {
        CHECK(result.history[i].index == static_cast<Index>(i));
    }
    CHECK(result.final_placement == result.history.back().placement);
    CHECK(!result.final_landscape.empty());
}

TEST_CASE("loop rejects invalid arguments") {
    CHECK_THROWS_AS(run_design_loop(toy_modes(), -0.1, toy_template(9), toy_sim(), 5),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_design_loop(toy_modes(), 0.1, toy_template(9), toy_sim(), 0),
                    std::invalid_argument);
}

TEST_CASE("decimation must keep retained modes below Nyquist") {
    const ModeSet          set = toy_modes();
    const SimulationParams sim = toy_sim();
    PlacementTemplate      tmpl = toy_template(sim.n_nodes);
    tmpl.decimation             = 16;  // 500/16 Hz cannot carry 62.85 Hz
    const SnapshotData data = simulate(set, sim.n_nodes, sim.dt, sim.t_final);
    CHECK_THROWS_AS(place_from_snapshots(data, tmpl), std::invalid_argument);
}
