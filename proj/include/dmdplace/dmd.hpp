#pragma once

#include "dmdplace/beam.hpp"
#include "dmdplace/types.hpp"

#include <vector>

namespace dmdplace {

/// Time-shift-stacked snapshot pair. For q stacks the columns are
/// [x_k; x_{k+1}; ...; x_{k+q-1}] and Xp holds their one-step advance, so
/// q = 1 reduces to the plain X / X' pair.
struct ShiftedSnapshots {
    Matrix X;
    Matrix Xp;
    Index  stacks  = 1;
    Index  n_state = 0;  // rows per stack block
    double dt      = 0.0;

    Index m_cols() const { return X.cols(); }
};

ShiftedSnapshots build_shifted_snapshots(const Eigen::Ref<const Matrix>& values,
                                         Index stacks, double dt);
ShiftedSnapshots build_shifted_snapshots(const SnapshotData& data, Index stacks);

/// Reduced-order model fitted by exact DMD on the stacked snapshots.
/// Eigenpairs are sorted by |b_j| * ||phi_j|| descending so the leading
/// columns are the dominant modes.
struct DmdModel {
    Matrix        U_r;          // (q n) x r left singular vectors of X
    Vector        sigma_r;      // r retained singular values
    Matrix        V_r;          // m x r right singular vectors
    Matrix        A_tilde;      // r x r reduced operator
    ComplexVector eigenvalues;  // discrete-time eigenvalues
    ComplexMatrix modes;        // (q n) x r dynamic modes
    ComplexVector amplitudes;   // least-squares fit of the first stacked snapshot
    Index         rank    = 0;
    Index         stacks  = 1;
    Index         n_state = 0;
    double        dt      = 0.0;
};

/// Fits exact DMD at the requested rank. Throws when the rank exceeds the
/// numerical rank of X (singular value below max(sigma) * 1e-12).
DmdModel fit_dmd(const ShiftedSnapshots& snap, Index rank);

/// Restriction to the `n_keep` dominant eigenpairs.
DmdModel truncate_model(const DmdModel& model, Index n_keep);

/// Normalized cumulative sum of singular values up to index k.
double energy_fraction(const Eigen::Ref<const Vector>& singular_values, Index k);

/// Real part of sum_j phi_j lambda_j^(t-1) b_j restricted to the requested
/// state rows (first stack block), at 1-based snapshot indices t.
Matrix reconstruct(const DmdModel& model, const std::vector<Index>& t_indices,
                   const std::vector<Index>& nodes);

struct ContinuousMode {
    double freq_hz = 0.0;
    double zeta    = 0.0;
};

/// Maps a discrete eigenvalue to (damped frequency, damping ratio) through
/// s = ln(lambda)/dt.
ContinuousMode discrete_to_continuous(Complex lambda, double dt);

std::vector<ContinuousMode> continuous_modes(const DmdModel& model);

}  // namespace dmdplace
