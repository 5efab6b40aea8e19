// Rigid-body attitude plant with reaction-wheel actuation and its
// state-dependent pseudo-linear factorization.
#pragma once

#include "dockmpc/errors.hpp"
#include "dockmpc/linalg.hpp"

namespace dockmpc {

struct InertiaParams {
    Vec3 J = Vec3(50.0, 35.0, 40.0);  // principal moments (kg m^2)
    Vec3 Jw = Vec3(5.0, 5.0, 5.0);    // wheel moments (kg m^2)

    void validate() const;  // all positive, Jw_i < J_i

    // Input gain per axis, (Jw_i^2 - J_i*Jw_i) / J_i^2; negative by invariant.
    Vec3 input_gain() const {
        return (Jw.array().square() - J.array() * Jw.array()) / J.array().square();
    }
};

// State vector [phi, theta, psi, w1, w2, w3]: 3-2-1 Euler angles of the
// chaser plus body angular rates.
struct AttitudeState {
    double phi = 0.0;
    double theta = 0.0;
    double psi = 0.0;
    double w1 = 0.0;
    double w2 = 0.0;
    double w3 = 0.0;

    Vec6 vec() const {
        Vec6 v;
        v << phi, theta, psi, w1, w2, w3;
        return v;
    }
    static AttitudeState from_vec(const Vec6& v) {
        return AttitudeState{v[0], v[1], v[2], v[3], v[4], v[5]};
    }
    void check_guards() const;  // throws GimbalLockError at |theta| >= pi/2 - guard
};

// Commanded wheel angular accelerations (rad/s^2).
struct WheelInput {
    double u_phi = 0.0;
    double u_theta = 0.0;
    double u_psi = 0.0;

    Vec3 vec() const { return Vec3(u_phi, u_theta, u_psi); }
};

// Euler-rate matrix T(phi, theta): maps body rates to 3-2-1 Euler-angle rates.
Mat3 euler_rate_matrix(double phi, double theta);

// Nonlinear attitude right-hand side: Euler kinematics plus rate dynamics
// under the linearized wheel relation.
Vec6 attitude_rhs(const AttitudeState& x, const WheelInput& u, const InertiaParams& inertia);

// Euler-angle accelerations (phi_dd, theta_dd, psi_dd) estimated by
// propagating one RK4 step of length dt with u held and differencing the
// Euler-angle rates; only their signs are consumed downstream.
Vec3 attitude_angle_accels(const AttitudeState& x, const WheelInput& u,
                           const InertiaParams& inertia, double dt);

// State-dependent Ac and constant Bc with Ac(x) * x + Bc * u equal to the
// attitude right-hand side exactly.
void attitude_jacobians(const AttitudeState& x, const InertiaParams& inertia,
                        Mat66& Ac, Mat63& Bc);

}  // namespace dockmpc
