#include "dmdplace/control_eval.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>

namespace dmdplace {

ModalLti build_modal_lti(const ModalBasis& basis,
                         const std::vector<Index>& sensor_nodes,
                         const std::vector<Index>& actuator_nodes, double dt,
                         Index n_keep) {
    if (n_keep < 1 || n_keep > basis.n_modes()) {
        throw std::invalid_argument("build_modal_lti: n_keep outside [1, n_modes]");
    }
    if (!(dt > 0.0)) {
        throw std::invalid_argument("build_modal_lti: dt must be positive");
    }
    const double f_max = basis.freq_hz.head(n_keep).maxCoeff();
    if (dt >= 0.5 / f_max) {
        throw std::invalid_argument("build_modal_lti: dt violates the Nyquist bound");
    }
    for (Index node : sensor_nodes) {
        if (node < 0 || node >= basis.shapes.rows()) {
            throw std::out_of_range("build_modal_lti: sensor node outside mesh");
        }
    }
    for (Index node : actuator_nodes) {
        if (node < 0 || node >= basis.shapes.rows()) {
            throw std::out_of_range("build_modal_lti: actuator node outside mesh");
        }
    }

    const Index n = 2 * n_keep;
    const Index m = static_cast<Index>(actuator_nodes.size());
    const Index p = static_cast<Index>(sensor_nodes.size());

    ModalLti plant;
    plant.Ac = Matrix::Zero(n, n);
    plant.Bc = Matrix::Zero(n, m);
    Matrix C = Matrix::Zero(p, n);
    for (Index i = 0; i < n_keep; ++i) {
        const double w = basis.omega(i);
        const double z = basis.zeta(i);
        plant.Ac(2 * i, 2 * i + 1)     = 1.0;
        plant.Ac(2 * i + 1, 2 * i)     = -w * w;
        plant.Ac(2 * i + 1, 2 * i + 1) = -2.0 * z * w;
        for (Index j = 0; j < m; ++j) {
            plant.Bc(2 * i + 1, j) = basis.shapes(actuator_nodes[static_cast<std::size_t>(j)], i);
        }
        for (Index j = 0; j < p; ++j) {
            C(j, 2 * i) = basis.shapes(sensor_nodes[static_cast<std::size_t>(j)], i);
        }
    }

    // Zero-order hold: exp([Ac Bc; 0 0] dt) packs Ad and Bd together.
    Matrix block = Matrix::Zero(n + m, n + m);
    block.topLeftCorner(n, n)  = plant.Ac * dt;
    block.topRightCorner(n, m) = plant.Bc * dt;
    const Matrix expm          = block.exp();

    plant.sys.A  = expm.topLeftCorner(n, n);
    plant.sys.B  = expm.topRightCorner(n, m);
    plant.sys.C  = C;
    plant.sys.dt = dt;
    plant.actuator_nodes = actuator_nodes;
    plant.sensor_nodes   = sensor_nodes;
    plant.n_modes        = n_keep;
    return plant;
}

LqrResult solve_lqr(const LtiSystem& sys, const Eigen::Ref<const Matrix>& Q,
                    const Eigen::Ref<const Matrix>& R) {
    const Index n = sys.order();
    const Index m = sys.n_inputs();
    if (Q.rows() != n || Q.cols() != n || R.rows() != m || R.cols() != m) {
        throw std::invalid_argument("solve_lqr: weight dimensions do not match the system");
    }

    LqrResult result;
    result.P = Q;
    // Value iteration contracts like rho(A-BK)^2; lightly damped modes at
    // kHz sampling need a large headroom.
    const Index max_iters = 2000000;
    for (Index it = 0; it < max_iters; ++it) {
        const Matrix BtP  = sys.B.transpose() * result.P;
        const Matrix gain = (R + BtP * sys.B).ldlt().solve(BtP * sys.A);
        Matrix P_next = Q + sys.A.transpose() * result.P * sys.A -
                        (sys.A.transpose() * BtP.transpose()) * gain;
        P_next = 0.5 * (P_next + P_next.transpose()).eval();

        const double prev_norm = result.P.norm();
        const double delta     = (P_next - result.P).norm();
        result.P               = P_next;
        result.iterations      = it + 1;
        if (delta <= 1e-12 * prev_norm) {
            break;
        }
        if (it + 1 == max_iters) {
            throw std::runtime_error("solve_lqr: Riccati iteration did not converge");
        }
    }

    const Matrix BtP = sys.B.transpose() * result.P;
    result.K         = (R + BtP * sys.B).ldlt().solve(BtP * sys.A);

    if (spectral_radius(sys.A - sys.B * result.K) >= 1.0) {
        throw std::runtime_error("solve_lqr: closed loop is not contractive");
    }
    return result;
}

Trajectory simulate_closed_loop(const LtiSystem& sys, const Matrix* K,
                                const Vector& x0, double t_final) {
    if (!(t_final > 0.0)) {
        throw std::invalid_argument("simulate_closed_loop: t_final must be positive");
    }
    if (x0.size() != sys.order()) {
        throw std::invalid_argument("simulate_closed_loop: x0 does not match the system order");
    }
    const Index n_steps = static_cast<Index>(std::llround(t_final / sys.dt));

    Trajectory traj;
    traj.t.resize(n_steps);
    traj.y.resize(sys.n_outputs(), n_steps);
    traj.u = Matrix::Zero(sys.n_inputs(), n_steps);

    Vector x = x0;
    for (Index k = 0; k < n_steps; ++k) {
        traj.t(k)     = static_cast<double>(k) * sys.dt;
        traj.y.col(k) = sys.C * x;
        if (K != nullptr) {
            traj.u.col(k) = -(*K) * x;
            x             = sys.A * x + sys.B * traj.u.col(k);
        } else {
            x = sys.A * x;
        }
    }
    return traj;
}

StepMetrics step_metrics(const Eigen::Ref<const Vector>& y, double dt,
                         double band) {
    const Index n = y.size();
    if (n < 2) {
        throw std::invalid_argument("step_metrics: need at least 2 samples");
    }

    // Terminal value from the tail so one oscillation sample cannot skew it.
    const Index  tail  = std::max<Index>(1, n / 50);
    const double final = y.tail(tail).mean();
    const double peak_abs = y.cwiseAbs().maxCoeff();

    StepMetrics metrics;
    const bool regulation = std::abs(final) <= 1e-6 * std::max(peak_abs, 1e-300);

    if (regulation) {
        // Excursion past zero, opposite to the initial offset, relative to
        // the initial amplitude.
        const double y0 = y(0);
        if (std::abs(y0) == 0.0 && peak_abs == 0.0) {
            metrics.overshoot_pct = 0.0;
        } else {
            const double ref  = std::abs(y0) > 0.0 ? std::abs(y0) : peak_abs;
            const double sign = y0 >= 0.0 ? 1.0 : -1.0;
            double worst      = 0.0;
            for (Index k = 0; k < n; ++k) {
                worst = std::max(worst, -sign * y(k));
            }
            metrics.overshoot_pct = 100.0 * std::max(0.0, worst) / ref;
        }
    } else {
        const double peak     = y.maxCoeff();
        metrics.overshoot_pct = 100.0 * std::max(0.0, peak - final) / std::abs(final);
    }

    const double ref_amp =
        regulation ? (std::abs(y(0)) > 0.0 ? std::abs(y(0)) : peak_abs)
                   : std::abs(final);
    const double tol = band * std::max(ref_amp, 1e-300);

    Index last_outside = -1;
    for (Index k = n - 1; k >= 0; --k) {
        if (std::abs(y(k) - final) > tol) {
            last_outside = k;
            break;
        }
    }
    if (last_outside == n - 1) {
        metrics.settled       = false;
        metrics.settling_time = static_cast<double>(n - 1) * dt;
    } else {
        metrics.settled       = true;
        metrics.settling_time = last_outside < 0 ? 0.0 : static_cast<double>(last_outside) * dt;
    }
    return metrics;
}

double control_effort(const Eigen::Ref<const Matrix>& u, double dt) {
    if (u.cols() < 2) {
        return 0.0;
    }
    double total = 0.0;
    for (Index c = 0; c < u.rows(); ++c) {
        double acc = 0.0;
        for (Index k = 0; k + 1 < u.cols(); ++k) {
            acc += 0.5 * (u(c, k) * u(c, k) + u(c, k + 1) * u(c, k + 1)) * dt;
        }
        total += acc;
    }
    return total;
}

ConfigMetrics evaluate_config(const std::string& label, const ModalLti& plant,
                              bool closed_loop, const Vector& x0,
                              const EvalSettings& settings,
                              Trajectory* trajectory_out) {
    const LtiSystem& sys = plant.sys;

    Matrix K;
    if (closed_loop) {
        const Matrix Q = sys.C.transpose() * sys.C;
        const Matrix R = settings.control_weight *
                         Matrix::Identity(sys.n_inputs(), sys.n_inputs());
        K = solve_lqr(sys, Q, R).K;
    }
    const Trajectory traj =
        simulate_closed_loop(sys, closed_loop ? &K : nullptr, x0, settings.horizon);

    ConfigMetrics metrics;
    metrics.label = label;
    const Index p = traj.y.rows();
    metrics.psd_variance.resize(p);
    metrics.overshoot_pct.resize(p);
    metrics.settling_time.resize(p);
    metrics.settled.resize(static_cast<std::size_t>(p));
    for (Index c = 0; c < p; ++c) {
        metrics.psd_variance(c) =
            welch_psd(traj.y.row(c).transpose(), sys.dt).integrated_variance;
        const StepMetrics sm = step_metrics(traj.y.row(c).transpose(), sys.dt,
                                            settings.band);
        metrics.overshoot_pct(c) = sm.overshoot_pct;
        metrics.settling_time(c) = sm.settled ? sm.settling_time : settings.horizon;
        metrics.settled[static_cast<std::size_t>(c)] = sm.settled;
    }

    metrics.effort.resize(traj.u.rows());
    for (Index c = 0; c < traj.u.rows(); ++c) {
        metrics.effort(c) = control_effort(traj.u.row(c), sys.dt);
    }

    metrics.agg_psd       = metrics.psd_variance.sum();
    metrics.agg_overshoot = metrics.overshoot_pct.mean();
    metrics.agg_settling  = metrics.settling_time.maxCoeff();
    metrics.agg_settled   = true;
    for (bool s : metrics.settled) {
        metrics.agg_settled = metrics.agg_settled && s;
    }
    metrics.agg_effort = metrics.effort.sum();

    if (trajectory_out != nullptr) {
        *trajectory_out = traj;
    }
    return metrics;
}

MetricReport compare_configs(const ModalLti& optimal, const ModalLti& suboptimal,
                             const Vector& x0, const EvalSettings& settings,
                             Trajectory* opt_traj, Trajectory* sub_traj,
                             Trajectory* open_traj) {
    MetricReport report;
    report.horizon    = settings.horizon;
    report.optimal    = evaluate_config("optimal", optimal, true, x0, settings, opt_traj);
    report.suboptimal = evaluate_config("suboptimal", suboptimal, true, x0, settings, sub_traj);
    report.open_loop  = evaluate_config("open-loop", optimal, false, x0, settings, open_traj);
    return report;
}

}  // namespace dmdplace
