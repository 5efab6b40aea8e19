// Tumbling-target attitude propagation and target-coupled desired pose
// horizons for both controllers.
#pragma once

#include <vector>

#include "dockmpc/attitude_dynamics.hpp"
#include "dockmpc/linalg.hpp"

namespace dockmpc {

struct TargetMotion {
    enum class Mode { Constant, Sinusoidal };

    Mode mode = Mode::Constant;
    Vec3 omega_const = Vec3::Zero();      // body rates (rad/s), Constant mode
    Vec3 amp = Vec3::Zero();              // amplitudes (rad/s), Sinusoidal mode
    Vec3 periods = Vec3::Ones();          // periods (s), Sinusoidal mode
    Vec3 initial_attitude = Vec3::Zero(); // Euler 3-2-1 angles (rad)
};

// Prescribed target body rates at time t.
Vec3 target_rates(const TargetMotion& motion, double t);

// One RK4 step of the Euler-angle kinematics with the given body rates held
// constant across the step.
Vec3 propagate_target(const Vec3& att, const Vec3& rates, double dt);

// Desired states for one prediction instant: x_dp pairs with LosState
// ordering, x_da with AttitudeState ordering.
struct DesiredPose {
    Vec6 x_dp = Vec6::Zero();
    Vec6 x_da = Vec6::Zero();
};

// Desired poses at t_k, t_k + Ts, ..., t_k + Np*Ts (Np + 1 entries), rolled
// forward from the target attitude at t_k.  Couplings:
//   x_dp = [rho_d, theta_t, -psi_t, 0, rho_d*theta_t_rate, -rho_d*psi_t_rate]
//   x_da = [phi_t, theta_t, psi_t, target body rates]
// where (theta_t_rate, psi_t_rate) are the target's Euler-angle rates.
// Angles are continuous (unwrapped); wrapping is owned by the caller.
std::vector<DesiredPose> desired_horizon(const Vec3& target_att, const TargetMotion& motion,
                                         double t_k, int Np, double Ts, double rho_d);

// Target attitude advanced by one control step, consistent with the
// propagation used inside desired_horizon (rates sampled at substep times).
Vec3 advance_target(const Vec3& target_att, const TargetMotion& motion, double t_k, double Ts);

}  // namespace dockmpc
