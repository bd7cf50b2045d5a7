#pragma once

#include "dmdplace/types.hpp"

#include <utility>
#include <vector>

namespace dmdplace {

/// One bending mode of the clamped-free beam: eigen-constant of the
/// characteristic equation, initial modal amplitude, damped frequency and
/// damping ratio.
struct ModeSpec {
    double lambda_const = 0.0;  // dimensionless root of cosh(l)cos(l) = -1
    double amplitude    = 0.0;  // initial modal displacement (m)
    double freq_hz      = 0.0;  // damped frequency f_d (Hz)
    double zeta         = 0.0;  // damping ratio, in (0, 1)
};

/// Ordered set of beam modes plus the physical beam length.
struct ModeSet {
    std::vector<ModeSpec> modes;
    double                beam_length = 1.0;

    Index n_modes() const { return static_cast<Index>(modes.size()); }

    /// Throws std::invalid_argument when the mode table is empty, the
    /// eigen-constants or frequencies are not strictly increasing, an
    /// amplitude is negative, or a damping ratio leaves (0, 1).
    void validate() const;
};

/// Built-in 10-mode demo beam used as the default configuration.
ModeSet default_mode_table();

/// Node-by-time displacement history on a 1-D mesh.
struct SnapshotData {
    Matrix values;  // n_nodes x n_t transverse displacement (m)
    Vector node_x;  // node positions (m), node_x(0) = 0 (clamped root)
    double dt = 0.0;

    Index n_nodes() const { return values.rows(); }
    Index n_t() const { return values.cols(); }
};

/// Clamped-free mode shape value at normalized position x in [0, 1].
/// phi(0) = 0 and phi'(0) = 0 by the clamped boundary condition.
double mode_shape(const ModeSpec& mode, double x_norm);

/// Natural frequency (rad/s) and damped frequency (Hz) per mode.
std::vector<std::pair<double, double>> modal_frequencies(const ModeSet& set);

/// Uniform mesh with the clamped root at x = 0 and the tip at x = length.
Vector uniform_mesh(Index n_nodes, double length);

/// Generic damped-cosine modal superposition inputs: shape values sampled on
/// a mesh plus per-mode natural frequency, damping, and amplitude. The truth
/// model fills this from the closed-form shapes; the design loop fills it
/// from mass-corrected modes.
struct ModalBasis {
    Matrix shapes;     // n_nodes x n_modes
    Vector omega;      // natural frequency (rad/s)
    Vector freq_hz;    // damped frequency (Hz)
    Vector zeta;       // damping ratio
    Vector amplitude;  // initial modal displacement (m)

    Index n_modes() const { return shapes.cols(); }
};

/// Evaluates the closed-form shapes of `set` on `node_x`.
ModalBasis modal_basis(const ModeSet& set, const Vector& node_x);

/// values(n, k) = sum_i amp_i * shape_i(x_n) * exp(-zeta_i w_i t_k)
///                        * cos(2 pi f_i t_k),  t_k = k dt, k < t_final/dt.
/// Rejects dt violating the Nyquist bound of the fastest mode.
SnapshotData synthesize(const ModalBasis& basis, const Vector& node_x,
                        double dt, double t_final);

/// Truth-model snapshot generation on a uniform mesh of n_nodes.
SnapshotData simulate(const ModeSet& set, Index n_nodes, double dt,
                      double t_final);

}  // namespace dmdplace
