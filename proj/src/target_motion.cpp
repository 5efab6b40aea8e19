#include "dockmpc/target_motion.hpp"

#include <cmath>

#include "dockmpc/attitude_dynamics.hpp"

namespace dockmpc {

namespace {

// RK4 step of the Euler-angle kinematics with rates sampled at the substep
// times (the prescribed rate profile is time-dependent in sinusoidal mode).
Vec3 kinematics_step(const Vec3& att, const TargetMotion& motion, double t, double dt) {
    const auto f = [&motion](const Vec3& a, double tt) -> Vec3 {
        return euler_rate_matrix(a[0], a[1]) * target_rates(motion, tt);
    };
    const Vec3 k1 = f(att, t);
    const Vec3 k2 = f(att + 0.5 * dt * k1, t + 0.5 * dt);
    const Vec3 k3 = f(att + 0.5 * dt * k2, t + 0.5 * dt);
    const Vec3 k4 = f(att + dt * k3, t + dt);
    return att + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

Vec3 target_rates(const TargetMotion& motion, double t) {
    if (motion.mode == TargetMotion::Mode::Constant) {
        return motion.omega_const;
    }
    Vec3 w;
    for (int i = 0; i < 3; ++i) {
        w[i] = motion.amp[i] * std::sin(2.0 * kPi * t / motion.periods[i]);
    }
    return w;
}

Vec3 propagate_target(const Vec3& att, const Vec3& rates, double dt) {
    const auto f = [&rates](const Vec3& a) -> Vec3 {
        return euler_rate_matrix(a[0], a[1]) * rates;
    };
    const Vec3 k1 = f(att);
    const Vec3 k2 = f(att + 0.5 * dt * k1);
    const Vec3 k3 = f(att + 0.5 * dt * k2);
    const Vec3 k4 = f(att + dt * k3);
    return att + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

std::vector<DesiredPose> desired_horizon(const Vec3& target_att, const TargetMotion& motion,
                                         double t_k, int Np, double Ts, double rho_d) {
    if (Np < 1) throw DimensionMismatchError("desired_horizon requires Np >= 1");
    std::vector<DesiredPose> out;
    out.reserve(static_cast<std::size_t>(Np) + 1);
    Vec3 att = target_att;
    for (int i = 0; i <= Np; ++i) {
        const double t = t_k + i * Ts;
        const Vec3 wb = target_rates(motion, t);
        const Vec3 erate = euler_rate_matrix(att[0], att[1]) * wb;
        DesiredPose d;
        d.x_dp << rho_d, att[1], -att[2], 0.0, rho_d * erate[1], -rho_d * erate[2];
        d.x_da << att, wb;
        out.push_back(d);
        if (i < Np) att = kinematics_step(att, motion, t, Ts);
    }
    return out;
}

Vec3 advance_target(const Vec3& target_att, const TargetMotion& motion, double t_k, double Ts) {
    return kinematics_step(target_att, motion, t_k, Ts);
}

}  // namespace dockmpc
