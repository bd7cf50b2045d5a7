#pragma once

#include "dmdplace/beam.hpp"
#include "dmdplace/hankel.hpp"
#include "dmdplace/spectral.hpp"
#include "dmdplace/types.hpp"

#include <string>
#include <vector>

namespace dmdplace {

/// Discrete modal LTI system whose B columns / C rows carry the placement:
/// per mode a continuous block [[0, 1], [-w^2, -2 zeta w]], inputs entering
/// through the shape values at the actuator nodes, outputs reading the shape
/// values at the sensor nodes, discretized by zero-order hold.
struct ModalLti {
    LtiSystem          sys;
    Matrix             Ac;  // continuous-time A, kept for analysis
    Matrix             Bc;
    std::vector<Index> actuator_nodes;
    std::vector<Index> sensor_nodes;
    Index              n_modes = 0;
};

/// Builds the modal system from the first `n_keep` columns of `basis`.
ModalLti build_modal_lti(const ModalBasis& basis,
                         const std::vector<Index>& sensor_nodes,
                         const std::vector<Index>& actuator_nodes, double dt,
                         Index n_keep);

struct LqrResult {
    Matrix K;
    Matrix P;
    Index  iterations = 0;
};

/// Discrete algebraic Riccati fixed point by value iteration, terminated at
/// a 1e-12 relative increment. Throws when the iteration fails to converge
/// (unstabilizable pair) or the closed loop is not contractive.
LqrResult solve_lqr(const LtiSystem& sys, const Eigen::Ref<const Matrix>& Q,
                    const Eigen::Ref<const Matrix>& R);

struct Trajectory {
    Vector t;
    Matrix y;  // outputs x time
    Matrix u;  // inputs x time, zero rows when open loop
};

/// State recursion from initial state x0 under u = -K x, or open loop when
/// K is null.
Trajectory simulate_closed_loop(const LtiSystem& sys, const Matrix* K,
                                const Vector& x0, double t_final);

struct StepMetrics {
    double overshoot_pct = 0.0;
    double settling_time = 0.0;
    bool   settled       = false;
};

/// Overshoot and settling time against the terminal value; regulation
/// responses (terminal value ~ 0) measure both against the initial
/// amplitude. An unsettled channel reports settled = false and the horizon
/// as its time.
StepMetrics step_metrics(const Eigen::Ref<const Vector>& y, double dt,
                         double band = 0.02);

/// Trapezoidal integral of the squared input, summed over channels.
double control_effort(const Eigen::Ref<const Matrix>& u, double dt);

struct ConfigMetrics {
    std::string       label;
    Vector            psd_variance;   // per channel
    Vector            overshoot_pct;  // per channel
    Vector            settling_time;  // per channel (horizon when unsettled)
    std::vector<bool> settled;
    Vector            effort;  // per input channel
    double            agg_psd       = 0.0;  // sum
    double            agg_overshoot = 0.0;  // average
    double            agg_settling  = 0.0;  // max
    bool              agg_settled   = false;
    double            agg_effort    = 0.0;  // sum
};

struct EvalSettings {
    double control_weight = 1e-2;  // rho in R = rho I
    double horizon        = 10.0;  // seconds
    double band           = 0.02;
};

/// Simulates one configuration and computes its metric row. Q = C'C and
/// R = rho I so the comparison isolates the placement carried by B and C.
ConfigMetrics evaluate_config(const std::string& label, const ModalLti& plant,
                              bool closed_loop, const Vector& x0,
                              const EvalSettings& settings,
                              Trajectory* trajectory_out = nullptr);

struct MetricReport {
    ConfigMetrics optimal;
    ConfigMetrics suboptimal;
    ConfigMetrics open_loop;
    double        horizon = 0.0;
};

/// Full three-way comparison under identical weights, excitation, and
/// horizon. The open-loop row reuses the optimal plant with feedback off.
MetricReport compare_configs(const ModalLti& optimal, const ModalLti& suboptimal,
                             const Vector& x0, const EvalSettings& settings,
                             Trajectory* opt_traj = nullptr,
                             Trajectory* sub_traj = nullptr,
                             Trajectory* open_traj = nullptr);

}  // namespace dmdplace
