#include "dmdplace/mass_correction.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dmdplace {

void MassLoad::validate(double beam_length) const {
    if (positions.size() != masses.size()) {
        throw std::invalid_argument("MassLoad: positions and masses differ in length");
    }
    for (double x : positions) {
        if (x < 0.0 || x > beam_length) {
            throw std::invalid_argument("MassLoad: position outside [0, L]");
        }
    }
    for (double m : masses) {
        if (!(m >= 0.0)) {
            throw std::invalid_argument("MassLoad: negative mass");
        }
    }
}

Matrix perturbation_matrix(const Eigen::Ref<const Matrix>& shape_values,
                           const std::vector<double>& masses) {
    if (static_cast<Index>(masses.size()) != shape_values.cols()) {
        throw std::invalid_argument("perturbation_matrix: one shape column per mass required");
    }
    const Index n = shape_values.rows();
    Matrix      Mp = Matrix::Identity(n, n);
    for (Index j = 0; j < shape_values.cols(); ++j) {
        const double m = masses[static_cast<std::size_t>(j)];
        if (!(m >= 0.0)) {
            throw std::invalid_argument("perturbation_matrix: negative mass");
        }
        Mp.noalias() += m * shape_values.col(j) * shape_values.col(j).transpose();
    }
    return 0.5 * (Mp + Mp.transpose());
}

CorrectedModes corrected_modes(const ModeSet& set, const MassLoad& load,
                               Index n_keep) {
    set.validate();
    load.validate(set.beam_length);
    const Index n_modes = set.n_modes();
    if (n_keep < 1 || n_keep > n_modes) {
        throw std::invalid_argument("corrected_modes: n_keep outside [1, n_modes]");
    }

    // Shape columns phi(x_j) over all retained modes, one per attached mass.
    Matrix shape_values(n_modes, static_cast<Index>(load.positions.size()));
    for (std::size_t j = 0; j < load.positions.size(); ++j) {
        const double x_norm = load.positions[j] / set.beam_length;
        for (Index i = 0; i < n_modes; ++i) {
            shape_values(i, static_cast<Index>(j)) =
                mode_shape(set.modes[static_cast<std::size_t>(i)], x_norm);
        }
    }
    const Matrix Mp = perturbation_matrix(shape_values, load.masses);

    // Symmetric-definite pencil diag(w^2) eta = w_bar^2 M_p eta: the added
    // kinetic energy enters the mass side, so every eigenvalue can only
    // drop below its unloaded counterpart.
    Vector omega_sq(n_modes);
    {
        const auto freqs = modal_frequencies(set);
        for (Index i = 0; i < n_modes; ++i) {
            omega_sq(i) = freqs[static_cast<std::size_t>(i)].first *
                          freqs[static_cast<std::size_t>(i)].first;
        }
    }
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> eig(
        Matrix(omega_sq.asDiagonal()), Mp);
    if (eig.info() != Eigen::Success) {
        throw std::runtime_error("corrected_modes: eigensolver failed");
    }

    // The k-th ascending eigenvalue pairs with the k-th unloaded mode:
    // interlacing gives w_bar_k <= w_k per mode, and enlarging any mass can
    // only push each eigenvalue further down.
    const Matrix& vectors = eig.eigenvectors();
    const Vector& values  = eig.eigenvalues();

    CorrectedModes out;
    out.eta.resize(n_modes, n_modes);
    out.freq_ratios.resize(n_modes);
    out.corrected_freq_hz.resize(n_modes);
    out.n_report = n_keep;

    for (Index i = 0; i < n_modes; ++i) {
        Vector eta_col = vectors.col(i);
        Index  dominant = 0;
        eta_col.cwiseAbs().maxCoeff(&dominant);
        if (eta_col(dominant) < 0.0) {
            eta_col = -eta_col;  // dominant component positive
        }
        out.eta.col(i) = eta_col;
        // eigenvalue = w_bar^2; mu = (w / w_bar)^2 >= 1, so added mass can
        // only lower the frequency.
        const double ratio_sq = std::min(values(i) / omega_sq(i), 1.0);
        out.freq_ratios(i)    = std::sqrt(ratio_sq);
        out.corrected_freq_hz(i) =
            set.modes[static_cast<std::size_t>(i)].freq_hz * out.freq_ratios(i);
    }

    // Combination coefficients scaled for unit tip amplitude.
    Vector tip_shape(n_modes);
    for (Index i = 0; i < n_modes; ++i) {
        tip_shape(i) = mode_shape(set.modes[static_cast<std::size_t>(i)], 1.0);
    }
    out.corrected_shapes = out.eta;
    for (Index i = 0; i < n_modes; ++i) {
        const double tip = tip_shape.dot(out.eta.col(i));
        if (std::abs(tip) > 0.0) {
            out.corrected_shapes.col(i) /= tip;
        }
    }
    return out;
}

ModalBasis corrected_basis(const ModeSet& set, const CorrectedModes& corrected,
                           const Vector& node_x) {
    const ModalBasis unloaded = modal_basis(set, node_x);
    ModalBasis       basis    = unloaded;
    basis.shapes              = unloaded.shapes * corrected.eta;
    basis.omega               = unloaded.omega.cwiseProduct(corrected.freq_ratios);
    basis.freq_hz             = unloaded.freq_hz.cwiseProduct(corrected.freq_ratios);
    return basis;
}

}  // namespace dmdplace
