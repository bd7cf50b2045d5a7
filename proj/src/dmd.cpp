#include "dmdplace/dmd.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace dmdplace {

ShiftedSnapshots build_shifted_snapshots(const Eigen::Ref<const Matrix>& values,
                                         Index stacks, double dt) {
    const Index n   = values.rows();
    const Index n_t = values.cols();
    if (stacks < 1) {
        throw std::invalid_argument("build_shifted_snapshots: stacks must be >= 1");
    }
    if (n_t < stacks + 1) {
        throw std::invalid_argument("build_shifted_snapshots: need at least stacks + 1 snapshots");
    }

    const Index m = n_t - stacks;
    ShiftedSnapshots snap;
    snap.X.resize(stacks * n, m);
    snap.Xp.resize(stacks * n, m);
    for (Index q = 0; q < stacks; ++q) {
        snap.X.middleRows(q * n, n)  = values.middleCols(q, m);
        snap.Xp.middleRows(q * n, n) = values.middleCols(q + 1, m);
    }
    snap.stacks  = stacks;
    snap.n_state = n;
    snap.dt      = dt;
    return snap;
}

ShiftedSnapshots build_shifted_snapshots(const SnapshotData& data, Index stacks) {
    return build_shifted_snapshots(data.values, stacks, data.dt);
}

DmdModel fit_dmd(const ShiftedSnapshots& snap, Index rank) {
    if (rank < 1) {
        throw std::invalid_argument("fit_dmd: rank must be >= 1");
    }
    const Index max_rank = std::min(snap.X.rows(), snap.X.cols());
    if (rank > max_rank) {
        throw std::invalid_argument("fit_dmd: rank exceeds matrix dimensions");
    }

    Eigen::BDCSVD<Matrix> svd(snap.X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector          sigma = svd.singularValues();
    if (sigma(0) == 0.0 || sigma(rank - 1) < sigma(0) * 1e-12) {
        throw std::invalid_argument("fit_dmd: rank exceeds the numerical rank of X");
    }

    DmdModel model;
    model.U_r     = svd.matrixU().leftCols(rank);
    model.sigma_r = sigma.head(rank);
    model.V_r     = svd.matrixV().leftCols(rank);
    model.rank    = rank;
    model.stacks  = snap.stacks;
    model.n_state = snap.n_state;
    model.dt      = snap.dt;

    // A_tilde = U_r' Xp V_r Sigma_r^-1
    const Matrix proj = snap.Xp * model.V_r * model.sigma_r.cwiseInverse().asDiagonal();
    model.A_tilde     = model.U_r.transpose() * proj;

    Eigen::EigenSolver<Matrix> eig(model.A_tilde);
    if (eig.info() != Eigen::Success) {
        throw std::runtime_error("fit_dmd: eigendecomposition failed");
    }
    model.eigenvalues = eig.eigenvalues();
    model.modes       = proj * eig.eigenvectors();

    // b solves modes * b ~= first stacked snapshot in least squares.
    const ComplexVector x1 = snap.X.col(0).cast<Complex>();
    model.amplitudes =
        model.modes.completeOrthogonalDecomposition().solve(x1);

    // Dominance ordering: |b_j| * ||phi_j|| descending, eigenvalue as tie-break.
    std::vector<Index> order(static_cast<std::size_t>(rank));
    std::iota(order.begin(), order.end(), Index{0});
    Vector weight(rank);
    for (Index j = 0; j < rank; ++j) {
        weight(j) = std::abs(model.amplitudes(j)) * model.modes.col(j).norm();
    }
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
        if (weight(a) != weight(b)) return weight(a) > weight(b);
        if (model.eigenvalues(a).real() != model.eigenvalues(b).real())
            return model.eigenvalues(a).real() > model.eigenvalues(b).real();
        return model.eigenvalues(a).imag() > model.eigenvalues(b).imag();
    });

    ComplexVector ev(rank), amp(rank);
    ComplexMatrix phi(model.modes.rows(), rank);
    for (Index j = 0; j < rank; ++j) {
        ev(j)      = model.eigenvalues(order[static_cast<std::size_t>(j)]);
        amp(j)     = model.amplitudes(order[static_cast<std::size_t>(j)]);
        phi.col(j) = model.modes.col(order[static_cast<std::size_t>(j)]);
    }
    model.eigenvalues = std::move(ev);
    model.amplitudes  = std::move(amp);
    model.modes       = std::move(phi);
    return model;
}

DmdModel truncate_model(const DmdModel& model, Index n_keep) {
    if (n_keep < 1 || n_keep > model.rank) {
        throw std::invalid_argument("truncate_model: n_keep outside [1, rank]");
    }
    DmdModel out    = model;
    out.eigenvalues = model.eigenvalues.head(n_keep);
    out.amplitudes  = model.amplitudes.head(n_keep);
    out.modes       = model.modes.leftCols(n_keep);
    out.rank        = n_keep;
    return out;
}

double energy_fraction(const Eigen::Ref<const Vector>& singular_values, Index k) {
    if (singular_values.size() == 0) {
        throw std::invalid_argument("energy_fraction: empty singular value list");
    }
    if (k > singular_values.size()) {
        throw std::invalid_argument("energy_fraction: k exceeds list length");
    }
    const double total = singular_values.sum();
    if (total == 0.0) {
        throw std::invalid_argument("energy_fraction: all singular values are zero");
    }
    return singular_values.head(k).sum() / total;
}

Matrix reconstruct(const DmdModel& model, const std::vector<Index>& t_indices,
                   const std::vector<Index>& nodes) {
    if (model.rank == 0) {
        throw std::invalid_argument("reconstruct: model is not fitted");
    }
    for (Index node : nodes) {
        if (node < 0 || node >= model.n_state) {
            throw std::out_of_range("reconstruct: node index out of range");
        }
    }

    ComplexMatrix phi_rows(static_cast<Index>(nodes.size()), model.rank);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        phi_rows.row(static_cast<Index>(i)) = model.modes.row(nodes[i]);
    }

    Matrix out(static_cast<Index>(nodes.size()), static_cast<Index>(t_indices.size()));
    for (std::size_t c = 0; c < t_indices.size(); ++c) {
        const Index t = t_indices[c];
        if (t < 1) {
            throw std::out_of_range("reconstruct: snapshot indices are 1-based");
        }
        ComplexVector coeff(model.rank);
        for (Index j = 0; j < model.rank; ++j) {
            coeff(j) = std::pow(model.eigenvalues(j), static_cast<double>(t - 1)) *
                       model.amplitudes(j);
        }
        out.col(static_cast<Index>(c)) = (phi_rows * coeff).real();
    }
    return out;
}

ContinuousMode discrete_to_continuous(Complex lambda, double dt) {
    if (lambda == Complex(0.0, 0.0)) {
        throw std::invalid_argument("discrete_to_continuous: zero eigenvalue");
    }
    if (!(dt > 0.0)) {
        throw std::invalid_argument("discrete_to_continuous: dt must be positive");
    }
    const Complex s = std::log(lambda) / dt;
    ContinuousMode mode;
    mode.freq_hz = std::abs(s.imag()) / (2.0 * std::numbers::pi);
    const double mag = std::abs(s);
    mode.zeta        = mag == 0.0 ? 0.0 : -s.real() / mag;
    return mode;
}

std::vector<ContinuousMode> continuous_modes(const DmdModel& model) {
    std::vector<ContinuousMode> out;
    out.reserve(static_cast<std::size_t>(model.rank));
    for (Index j = 0; j < model.rank; ++j) {
        out.push_back(discrete_to_continuous(model.eigenvalues(j), model.dt));
    }
    return out;
}

}  // namespace dmdplace
