#include "dmdplace/beam.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dmdplace {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double natural_frequency(const ModeSpec& mode) {
    return kTwoPi * mode.freq_hz / std::sqrt(1.0 - mode.zeta * mode.zeta);
}

}  // namespace

void ModeSet::validate() const {
    if (modes.empty()) {
        throw std::invalid_argument("ModeSet: mode table is empty");
    }
    if (!(beam_length > 0.0)) {
        throw std::invalid_argument("ModeSet: beam_length must be positive");
    }
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const ModeSpec& m = modes[i];
        if (!(m.amplitude >= 0.0)) {
            throw std::invalid_argument("ModeSet: amplitude of mode " + std::to_string(i + 1) + " is negative");
        }
        if (!(m.freq_hz > 0.0)) {
            throw std::invalid_argument("ModeSet: frequency of mode " + std::to_string(i + 1) + " must be positive");
        }
        if (!(m.zeta > 0.0 && m.zeta < 1.0)) {
            throw std::invalid_argument("ModeSet: damping ratio of mode " + std::to_string(i + 1) +
                                        " must lie in (0, 1)");
        }
        if (i > 0) {
            if (!(m.lambda_const > modes[i - 1].lambda_const)) {
                throw std::invalid_argument("ModeSet: eigen-constants must be strictly increasing");
            }
            if (!(m.freq_hz > modes[i - 1].freq_hz)) {
                throw std::invalid_argument("ModeSet: frequencies must be strictly increasing");
            }
        }
    }
}

ModeSet default_mode_table() {
    ModeSet set;
    set.beam_length = 1.0;
    set.modes       = {
        {1.8751, 0.800, 3.58, 0.01},
        {4.6941, 0.500, 22.45, 0.03},
        {7.8548, 0.100, 62.85, 0.04},
        {10.9955, 0.020, 122.85, 0.08},
        {14.1372, 0.010, 203.09, 0.08},
        {17.2877, 0.010, 303.38, 0.08},
        {20.4204, 0.005, 423.72, 0.08},
        {23.5619, 0.005, 563.10, 0.10},
        {26.7035, 0.002, 723.27, 0.10},
        {29.8451, 0.001, 903.47, 0.10},
    };
    return set;
}

double mode_shape(const ModeSpec& mode, double x_norm) {
    if (x_norm < 0.0 || x_norm > 1.0) {
        throw std::invalid_argument("mode_shape: x_norm outside [0, 1]");
    }
    const double l  = mode.lambda_const;
    const double lx = l * x_norm;
    const double sigma =
        (std::cosh(l) + std::cos(l)) / (std::sinh(l) + std::sin(l));
    return std::cosh(lx) - std::cos(lx) - sigma * (std::sinh(lx) - std::sin(lx));
}

std::vector<std::pair<double, double>> modal_frequencies(const ModeSet& set) {
    set.validate();
    std::vector<std::pair<double, double>> out;
    out.reserve(set.modes.size());
    for (const ModeSpec& m : set.modes) {
        out.emplace_back(natural_frequency(m), m.freq_hz);
    }
    return out;
}

Vector uniform_mesh(Index n_nodes, double length) {
    if (n_nodes < 2) {
        throw std::invalid_argument("uniform_mesh: need at least 2 nodes");
    }
    Vector x(n_nodes);
    for (Index i = 0; i < n_nodes; ++i) {
        x(i) = length * static_cast<double>(i) / static_cast<double>(n_nodes - 1);
    }
    return x;
}

ModalBasis modal_basis(const ModeSet& set, const Vector& node_x) {
    set.validate();
    const Index n_nodes = node_x.size();
    const Index n_modes = set.n_modes();

    ModalBasis basis;
    basis.shapes.resize(n_nodes, n_modes);
    basis.omega.resize(n_modes);
    basis.freq_hz.resize(n_modes);
    basis.zeta.resize(n_modes);
    basis.amplitude.resize(n_modes);

    for (Index j = 0; j < n_modes; ++j) {
        const ModeSpec& m = set.modes[static_cast<std::size_t>(j)];
        for (Index i = 0; i < n_nodes; ++i) {
            basis.shapes(i, j) = mode_shape(m, node_x(i) / set.beam_length);
        }
        basis.omega(j)     = natural_frequency(m);
        basis.freq_hz(j)   = m.freq_hz;
        basis.zeta(j)      = m.zeta;
        basis.amplitude(j) = m.amplitude;
    }
    return basis;
}

SnapshotData synthesize(const ModalBasis& basis, const Vector& node_x,
                        double dt, double t_final) {
    if (node_x.size() < 2) {
        throw std::invalid_argument("synthesize: need at least 2 nodes");
    }
    if (node_x.size() != basis.shapes.rows()) {
        throw std::invalid_argument("synthesize: mesh size does not match basis");
    }
    if (!(dt > 0.0) || !(t_final > 0.0)) {
        throw std::invalid_argument("synthesize: dt and t_final must be positive");
    }
    const double f_max = basis.freq_hz.maxCoeff();
    if (dt >= 0.5 / f_max) {
        throw std::invalid_argument(
            "synthesize: dt = " + std::to_string(dt) + " violates the Nyquist bound 1/(2*" +
            std::to_string(f_max) + " Hz)");
    }

    const Index n_t = static_cast<Index>(std::llround(t_final / dt));
    if (n_t < 3) {
        throw std::invalid_argument("synthesize: fewer than 3 time samples requested");
    }

    const Index n_modes = basis.n_modes();
    Matrix      coords(n_modes, n_t);  // modal coordinates over time
    for (Index k = 0; k < n_t; ++k) {
        const double t = static_cast<double>(k) * dt;
        for (Index j = 0; j < n_modes; ++j) {
            coords(j, k) = basis.amplitude(j) *
                           std::exp(-basis.zeta(j) * basis.omega(j) * t) *
                           std::cos(kTwoPi * basis.freq_hz(j) * t);
        }
    }

    SnapshotData data;
    data.values = basis.shapes * coords;
    data.node_x = node_x;
    data.dt     = dt;
    return data;
}

SnapshotData simulate(const ModeSet& set, Index n_nodes, double dt,
                      double t_final) {
    set.validate();
    if (n_nodes < 2) {
        throw std::invalid_argument("simulate: need at least 2 nodes");
    }
    const Vector mesh = uniform_mesh(n_nodes, set.beam_length);
    return synthesize(modal_basis(set, mesh), mesh, dt, t_final);
}

}  // namespace dmdplace
