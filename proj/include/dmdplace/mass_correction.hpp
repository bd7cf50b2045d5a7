#pragma once

#include "dmdplace/beam.hpp"
#include "dmdplace/types.hpp"

#include <vector>

namespace dmdplace {

/// Point masses attached to the beam, expressed as ratios of the modal mass
/// (the unloaded shapes are mass-normalized).
struct MassLoad {
    std::vector<double> positions;  // along the beam (m)
    std::vector<double> masses;     // modal-mass ratios, >= 0

    void validate(double beam_length) const;
};

/// Mass-perturbed modes: the symmetric rank-update eigenproblem
/// (I + sum_j m_j phi(x_j) phi(x_j)') eta = mu eta with mu = (w / w_bar)^2,
/// so every corrected frequency satisfies w_bar <= w.
struct CorrectedModes {
    Vector freq_ratios;       // w_bar / w per mode, in (0, 1]
    Matrix eta;               // eigenvectors, identity at zero load
    Matrix corrected_shapes;  // combination coefficients over the unloaded
                              // modes, scaled for unit tip amplitude
    Vector corrected_freq_hz; // damped frequencies after correction
    Index  n_report = 0;      // modes retained for reporting
};

/// I + sum_j m_j phi_j phi_j' from per-mass shape columns. Rejects negative
/// masses.
Matrix perturbation_matrix(const Eigen::Ref<const Matrix>& shape_values,
                           const std::vector<double>& masses);

/// Solves the perturbed eigenproblem over every mode of `set`; `n_keep`
/// bounds the modes retained for reporting. Eigenpairs are matched to the
/// unloaded modes by their dominant component.
CorrectedModes corrected_modes(const ModeSet& set, const MassLoad& load,
                               Index n_keep);

/// Synthesis basis with the corrected shapes (unloaded shapes combined by
/// eta, no renormalization, so zero load reproduces the unloaded basis
/// exactly) and the corrected frequencies.
ModalBasis corrected_basis(const ModeSet& set, const CorrectedModes& corrected,
                           const Vector& node_x);

}  // namespace dmdplace
