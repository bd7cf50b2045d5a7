#pragma once

#include "dmdplace/beam.hpp"
#include "dmdplace/dmd.hpp"
#include "dmdplace/placement.hpp"
#include "dmdplace/types.hpp"

#include <vector>

namespace dmdplace {

struct SimulationParams {
    Index  n_nodes = 51;
    double dt      = 1.0 / 4000.0;
    double t_final = 2.0;
};

/// Placement-stage knobs reused on every loop iteration. `hankel_depth` of 0
/// selects the depth from the dominant temporal period of the reconstructed
/// data. `decimation` strides the DMD reconstruction before Hankel
/// assembly; it must keep the retained modes below the decimated Nyquist
/// rate.
struct PlacementTemplate {
    std::vector<Index> candidates;
    Index              n_sensors    = 2;
    Index              truncation   = 6;
    Index              hankel_depth = 0;
    Index              lower_bound  = 0;
    Index              upper_bound  = 0;
    Index              decimation   = 16;
    Index              dmd_stacks   = 2;
    Index              dmd_rank     = 6;
};

/// One identify-and-place pass: DMD fit, decimated reconstruction over all
/// nodes, Hankel-depth selection, exhaustive search.
struct PlacementPass {
    DmdModel        model;
    Matrix          Y;     // reconstructed outputs, nodes x decimated time
    double          dt_y = 0.0;
    Index           depth = 0;
    PlacementResult result;
};

PlacementPass place_from_snapshots(const SnapshotData& data,
                                   const PlacementTemplate& tmpl);

struct DesignIteration {
    Index              index = 0;
    std::vector<Index> placement;
    double             cost = 0.0;
    Vector             corrected_freq_hz;
    Index              dmd_rank = 0;
    ComplexVector      eigenvalues;
};

struct DesignResult {
    std::vector<DesignIteration> history;
    bool                         converged      = false;
    bool                         cycle_detected = false;
    std::vector<Index>           final_placement;
    std::vector<LandscapePoint>  final_landscape;
};

/// Iterates {attach pair masses at the current placement, correct the modes,
/// regenerate snapshots, refit DMD, re-optimize placement} until the
/// placement repeats. A revisit of any earlier placement other than the
/// immediately preceding one terminates as a detected cycle.
DesignResult run_design_loop(const ModeSet& set, double pair_mass,
                             const PlacementTemplate& tmpl,
                             const SimulationParams& sim, Index max_iters);

}  // namespace dmdplace
