#pragma once

#include "dmdplace/types.hpp"

#include <cstdint>
#include <vector>

namespace dmdplace {

/// Candidate-selection problem over the rows of a reconstructed output
/// matrix. Candidates are row indices into Y; index bounds act as a box
/// constraint on admissible candidates.
struct PlacementProblem {
    Matrix             Y;            // n_x x n_t reconstructed outputs
    std::vector<Index> candidates;   // row indices into Y
    Index              n_sensors   = 2;
    Index              hankel_depth = 1;  // block rows per output
    Index              truncation   = 6;  // leading singular values in the cost
    Index              lower_bound  = 0;  // inclusive candidate-index bounds
    Index              upper_bound  = 0;

    /// Throws std::invalid_argument on any violated precondition, including
    /// a subset budget above 1e6 combinations.
    void validate() const;
};

struct LandscapePoint {
    Index  outer   = 0;
    Index  partner = 0;
    double cost    = 0.0;
};

struct PlacementResult {
    std::vector<Index>          best_subset;  // sorted candidate indices
    double                      best_cost = 0.0;
    std::vector<LandscapePoint> landscape;    // filled for n_sensors == 2
    std::uint64_t               evaluations = 0;
};

/// Reciprocal-HSV cost: sum of 1/sigma_i over the `truncation` largest
/// singular values. Returns +inf when any of them sits below the floor
/// max(sigma) * 1e-12, so degenerate subsets rank last without aborting a
/// sweep.
double placement_cost(const Eigen::Ref<const Vector>& singular_values,
                      Index truncation);

/// Singular values of the output-data Hankel for one candidate subset.
Vector output_hankel_singular_values(const Eigen::Ref<const Matrix>& Y,
                                     const std::vector<Index>& subset,
                                     Index s);

/// Evaluates the cost of every size-n_sensors subset in lexicographic order
/// and returns the global minimizer (ties resolved to the lexicographically
/// smallest tuple). For n_sensors == 2 the per-outer-candidate landscape is
/// filled as well.
PlacementResult exhaustive_search(const PlacementProblem& problem);

/// Landscape view of the pairwise search: for each outer candidate the
/// best partner and its cost. Requires n_sensors == 2.
std::vector<LandscapePoint> cost_landscape(const PlacementProblem& problem);

}  // namespace dmdplace
