// Closed-loop rendezvous-and-docking simulation: scenario description,
// per-step trajectory log, summary metrics, and the simulation driver that
// ties dynamics, prediction, constraints, and the QP solver together.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dockmpc/angle_wrap.hpp"
#include "dockmpc/attitude_dynamics.hpp"
#include "dockmpc/constraints.hpp"
#include "dockmpc/los_dynamics.hpp"
#include "dockmpc/prediction.hpp"
#include "dockmpc/qp_solver.hpp"
#include "dockmpc/target_motion.hpp"

namespace dockmpc {

enum class ControlMode { Standard, Sampling };

const char* control_mode_name(ControlMode mode);

// Complete description of one closed-loop run.
struct Scenario {
    std::string name;

    OrbitParams orbit;
    InertiaParams inertia;
    TargetMotion target;

    MpcTuning tuning_p;           // translation controller (n = 6, m = 3)
    MpcTuning tuning_a;           // attitude controller (n = 6, m = 3)
    ConstraintParams limits;

    LosState x0_p;
    AttitudeState x0_a;

    double rho_d = 6.0;           // desired hold range (m)
    double duration = 100.0;      // simulated time (s)
    ControlMode mode = ControlMode::Standard;
    std::uint64_t seed = 1;

    double conv_pos_threshold = 0.05;      // m, on the LVLH position error norm
    double conv_att_threshold_deg = 0.5;   // deg, on the largest Euler-angle error

    // Horizon lengths and step must agree between the two controllers and
    // every angle/limit must be in range; throws ValidationError otherwise.
    void validate() const;
};

// One control step of the closed-loop log.  Desired values and margins are
// reported in the controller's working representation (after wrap handling);
// margins are measured on the true state at the end of the step, positive
// when the constraint is satisfied.
struct StepRecord {
    double t = 0.0;
    Vec6 x_p = Vec6::Zero();
    Vec6 x_a = Vec6::Zero();
    Vec6 xd_p = Vec6::Zero();
    Vec6 xd_a = Vec6::Zero();
    Vec3 u_p = Vec3::Zero();
    Vec3 u_a = Vec3::Zero();

    double range_margin = 0.0;      // rho - r_safe
    double cone_eps_margin = 0.0;   // gamma_e - |eps - eps_center|
    double cone_beta_margin = 0.0;  // gamma_e - |beta - beta_center|
    double fov_roll_margin = 0.0;   // (pi + 2*delta) - |phi|
    double fov_pitch_margin = 0.0;  // gamma_f - |theta - theta_center|
    double fov_yaw_margin = 0.0;    // gamma_f - |psi - psi_center|

    QpStatus status_p = QpStatus::Optimal;
    int iters_p = 0;
    int relax_p = 0;                // constraint rows relaxed by the translation QP
    QpStatus status_a = QpStatus::Optimal;
    int iters_a = 0;
    int relax_a = 0;

    WrapBranch wrap_beta = WrapBranch::NoEvent;
    WrapBranch wrap_psi = WrapBranch::NoEvent;
    WrapBranch wrap_phi = WrapBranch::NoEvent;
    double carried_beta = 0.0;      // tracking error carried across a reset (0 if none)
    double carried_psi = 0.0;
    double carried_phi = 0.0;
};

struct TrajectoryLog {
    std::string scenario_name;
    double Ts = 0.1;
    std::vector<StepRecord> steps;

    // Fixed CSV column order; emit/parse and the golden test all use this.
    static const std::vector<std::string>& csv_columns();
};

// Per-channel tracking summary.  Convergence time is the first time after
// which |error| stays below the channel threshold; overshoot is the largest
// excursion past zero against the sign of the initial error; ss_rms is the
// error RMS over the post-convergence tail.
struct ChannelMetrics {
    double conv_time = -1.0;   // s, -1 when never converged
    double overshoot = 0.0;    // channel unit (m or rad), 0 when no crossing
    double ss_rms = 0.0;       // channel unit
};

inline constexpr int kNumRowFamilies = 7;

// Summary numbers for one run.  Violation counts are over true states;
// *_unrelaxed counts violations at steps where the responsible QP reported
// no relaxation.  max_violation is indexed by RowFamily and measures the
// worst true-state constraint violation in natural units (N or rad), zero
// when a family was never violated.
struct Metrics {
    ChannelMetrics rho, eps, beta;   // translation channels
    ChannelMetrics phi, theta, psi;  // attitude channels

    double conv_time_pos = -1.0;     // s, on the LVLH position error norm
    double conv_time_att = -1.0;     // s, on the largest Euler-angle error
    double lvlh_rms = 0.0;           // m, position error RMS over the final tail
    double att_peak_deg = 0.0;       // deg, largest post-convergence attitude error
    double min_rho = 0.0;            // m, over the whole run
    double peak_beta_dev_deg = 0.0;  // deg, largest |beta - beta_center| seen
    double transit_mae_eps_deg = 0.0;  // deg, mean |eps error| over the first 20 s
    double transit_mae_beta_deg = 0.0; // deg, mean |beta error| over the first 20 s

    double max_violation[kNumRowFamilies] = {0, 0, 0, 0, 0, 0, 0};
    int cone_violations = 0;
    int fov_violations = 0;
    int cone_violations_unrelaxed = 0;
    int fov_violations_unrelaxed = 0;
    int relax_steps_p = 0;           // steps whose translation QP relaxed something
    int relax_steps_a = 0;
    int wrap_resets = 0;
    double max_carried_error_deg = 0.0;
};

struct SimResult {
    TrajectoryLog log;
    Metrics metrics;
};

// Run the scenario to completion.  Deterministic for a fixed scenario
// (sampling noise comes from counter-seeded streams derived from
// scenario.seed).  Throws on validation failures or numerical guards.
SimResult run_closed_loop(const Scenario& scenario);

// Metrics recomputed from a log (run_closed_loop fills them already; this
// is the same computation exposed for tests and the CLI).
Metrics compute_metrics(const TrajectoryLog& log, const Scenario& scenario);

// Exact (bitwise) equality of two logs; index of the first differing step
// is written to first_diff when provided and the logs differ.
bool logs_identical(const TrajectoryLog& a, const TrajectoryLog& b, int* first_diff = nullptr);

// Side-by-side summary of two runs of the same scenario under different
// control modes (or seeds).  Deltas are b minus a.
struct ModeComparison {
    std::string scenario_name;
    std::string label_a;             // e.g. "standard"
    std::string label_b;             // e.g. "sampling seed 3"
    Metrics metrics_a;
    Metrics metrics_b;

    // Per channel, in rho/eps/beta/phi/theta/psi order.
    double overshoot_delta[6] = {0, 0, 0, 0, 0, 0};
    double conv_time_delta[6] = {0, 0, 0, 0, 0, 0};
    double mean_abs_err_a[6] = {0, 0, 0, 0, 0, 0};   // whole-run mean |error|
    double mean_abs_err_b[6] = {0, 0, 0, 0, 0, 0};
};

// Builds the comparison report from two logs of the same scenario; throws
// ScenarioMismatchError when names, step counts, or Ts differ.
ModeComparison compare_logs(const TrajectoryLog& a, const TrajectoryLog& b,
                            const Scenario& scenario, const std::string& label_a,
                            const std::string& label_b);

}  // namespace dockmpc
