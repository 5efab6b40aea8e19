// Nonlinear line-of-sight relative translation plant, its state-dependent
// pseudo-linear factorization, orbital-element propagation, and a generic
// fixed-step RK4 integrator.
#pragma once

#include <functional>

#include "dockmpc/errors.hpp"
#include "dockmpc/linalg.hpp"

namespace dockmpc {

struct OrbitParams {
    double a = 1.0e7;              // semi-major axis (m)
    double e = 0.0;                // eccentricity
    double f0 = 0.0;               // initial true anomaly (rad)
    double mu = 3.986004418e14;    // gravitational parameter (m^3/s^2)

    void validate() const;         // a > 0, 0 <= e < 1, mu > 0
};

struct OrbitState {
    double f = 0.0;          // true anomaly (rad)
    double Rt = 0.0;         // target geocentric distance (m)
    double omega = 0.0;      // orbital rate (rad/s)
    double omega_dot = 0.0;  // orbital rate derivative (rad/s^2)
    double grav = 0.0;       // mu / Rt^3 (1/s^2), gravity-gradient strength
};

// State vector [rho, eps, beta, rho_dot, rho*eps_dot, rho*beta_dot].
struct LosState {
    double rho = 0.0;
    double eps = 0.0;
    double beta = 0.0;
    double rho_dot = 0.0;
    double rho_epsdot = 0.0;
    double rho_betadot = 0.0;

    Vec6 vec() const {
        Vec6 v;
        v << rho, eps, beta, rho_dot, rho_epsdot, rho_betadot;
        return v;
    }
    static LosState from_vec(const Vec6& v) {
        return LosState{v[0], v[1], v[2], v[3], v[4], v[5]};
    }
    void check_guards() const;  // throws GimbalLockError / DegenerateRangeError
};

// Specific thrust along (rho, eps, beta) channels (m/s^2).
struct TranslationInput {
    double u_rho = 0.0;
    double u_eps = 0.0;
    double u_beta = 0.0;

    Vec3 vec() const { return Vec3(u_rho, u_eps, u_beta); }
};

// Closed-form orbit quantities at a given true anomaly.
OrbitState orbit_state_at(const OrbitParams& orbit, double f);

// Advance the true anomaly over dt with one RK4 step of f_dot = omega(f),
// then recompute Rt, omega, omega_dot in closed form.
OrbitState propagate_orbit(const OrbitParams& orbit, const OrbitState& prev, double dt);

struct LosDerivative {
    Vec6 dx;      // exact nonlinear state derivative
    Vec3 accels;  // (rho_dd, eps_dd, beta_dd), used for sampling signs
};

// Exact nonlinear right-hand side of the LOS translation dynamics.
LosDerivative los_rhs(const LosState& x, const TranslationInput& u, const OrbitState& orb);

// State-dependent (Ac, Bc) with Ac(x) * x + Bc * u equal to los_rhs exactly.
void los_jacobians(const LosState& x, const OrbitState& orb, Mat66& Ac, Mat63& Bc);

// Chaser position in the target's LVLH frame: 3(eps)-2(beta) rotation
// applied to (rho, 0, 0).
Vec3 los_to_lvlh(const LosState& x);

// Classical fixed-step RK4 for dx/dt = rhs(x, u) with u held over the step.
VecX rk4_step(const std::function<VecX(const VecX&, const VecX&)>& rhs,
              const VecX& state, const VecX& u, double dt);

}  // namespace dockmpc
