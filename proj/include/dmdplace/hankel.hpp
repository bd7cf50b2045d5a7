#pragma once

#include "dmdplace/types.hpp"

#include <cstdint>
#include <vector>

namespace dmdplace {

/// Discrete-time LTI system x_{k+1} = A x_k + B u_k, y_k = C x_k.
struct LtiSystem {
    Matrix A;
    Matrix B;
    Matrix C;
    double dt = 0.0;

    Index order() const { return A.rows(); }
    Index n_inputs() const { return B.cols(); }
    Index n_outputs() const { return C.rows(); }
};

double spectral_radius(const Eigen::Ref<const Matrix>& A);

/// Impulse-response matrices h_k = C A^(k-1) B, k = 1..count.
std::vector<Matrix> markov_params(const LtiSystem& sys, Index count);

/// Block Hankel with block (i, j) = h_{i+j-1}; needs s + r - 1 parameters.
Matrix build_hankel_markov(const std::vector<Matrix>& h, Index s, Index r);

/// [C; CA; ...; CA^(s-1)]
Matrix observability_matrix(const LtiSystem& sys, Index s);
/// [B, AB, ..., A^(r-1) B]
Matrix controllability_matrix(const LtiSystem& sys, Index r);

/// Output-data block Hankel: for each selected output an s-row Hankel of its
/// time series, blocks stacked vertically; the column count is
/// r = n_t - 2s + 1.
Matrix build_output_hankel(const Eigen::Ref<const Matrix>& Y,
                           const std::vector<Index>& subset, Index s);

/// Block-row count from the dominant temporal period of the rows of Y:
/// s = ceil(T_dom / dt), clipped so that n_t >= 2s. Throws on data without
/// an oscillatory peak.
Index choose_hankel_depth(const Eigen::Ref<const Matrix>& Y, double dt);

struct GramianPair {
    Matrix Wc;  // sum_{k<r} A^k B B' (A^k)'
    Matrix Wo;  // sum_{k<s} (A^k)' C' C A^k
};

/// Finite-horizon Gramian truncations; both symmetric positive semidefinite.
GramianPair finite_gramians(const LtiSystem& sys, Index s, Index r);

struct EquivalenceReport {
    Index  n           = 0;
    Index  s           = 0;
    Index  r           = 0;
    double max_rel_dev = 0.0;
    bool   pass        = false;
};

/// Checks that the nonzero singular values of the Markov-parameter Hankel
/// match the square roots of the nonzero eigenvalues of Os Wc Os' (and of
/// Cr' Wo Cr) within `tol` relative. The Gramian products carry the
/// spectrum squared, so the zero/nonzero floor is an absolute cut in the
/// eigenvalue scale (1e-12 of the largest, i.e. 1e-6 of the largest
/// singular value), widened as needed for the requested tolerance.
EquivalenceReport verify_spectrum_equivalence(const LtiSystem& sys, Index s,
                                              Index r, double tol);

/// Random stable system: A is an orthogonal similarity of a diagonal with
/// |eigenvalue| in [0.2, 0.95]; B and C dense Gaussian.
LtiSystem random_stable_system(Index n, Index m, Index p, std::uint64_t seed);

/// The system used by trial `t` of run_equivalence_trials under the same
/// seed, so other checks can run on identical instances.
LtiSystem equivalence_trial_system(Index trial, Index max_order,
                                   std::uint64_t seed);

struct EquivalenceSummary {
    std::vector<EquivalenceReport> trials;
    double                         worst_dev = 0.0;
    bool                           pass      = false;
};

/// Runs `trials` randomized equivalence checks with n in [1, max_order] and
/// s = r = 2n, reduced deterministically by trial index.
EquivalenceSummary run_equivalence_trials(Index trials, Index max_order,
                                          double tol, std::uint64_t seed);

}  // namespace dmdplace
