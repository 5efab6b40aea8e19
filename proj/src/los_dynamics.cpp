#include "dockmpc/los_dynamics.hpp"

#include <cmath>

namespace dockmpc {

namespace {

constexpr double kGimbalGuard = 1e-9;

// Floor used when forming 1/rho terms in the pseudo-linear factorization,
// keeping the frozen model bounded if the plan grazes short range.
double guarded_rho(double rho) { return std::max(rho, 1.0); }

}  // namespace

void OrbitParams::validate() const {
    if (!(a > 0.0)) throw ValidationError("orbit.a must be positive");
    if (!(e >= 0.0 && e < 1.0)) throw ValidationError("orbit.e must lie in [0, 1)");
    if (!(mu > 0.0)) throw ValidationError("orbit.mu must be positive");
    if (!std::isfinite(f0)) throw ValidationError("orbit.f0 must be finite");
}

void LosState::check_guards() const {
    if (!vec().allFinite()) {
        throw NonFiniteError("LOS state contains non-finite entries");
    }
    if (!(rho > 0.0)) {
        throw DegenerateRangeError("range rho reached zero");
    }
    if (std::abs(eps) >= kPi / 2.0 - kGimbalGuard) {
        throw GimbalLockError("elevation eps reached +/-90 deg");
    }
}

OrbitState orbit_state_at(const OrbitParams& orbit, double f) {
    const double p = orbit.a * (1.0 - orbit.e * orbit.e);
    const double Rt = p / (1.0 + orbit.e * std::cos(f));
    OrbitState s;
    s.f = f;
    s.Rt = Rt;
    s.omega = std::sqrt(orbit.mu * p) / (Rt * Rt);
    s.omega_dot = -2.0 * orbit.mu * orbit.e * std::sin(f) / (Rt * Rt * Rt);
    s.grav = orbit.mu / (Rt * Rt * Rt);
    return s;
}

OrbitState propagate_orbit(const OrbitParams& orbit, const OrbitState& prev, double dt) {
    const double f = prev.f;
    const double k1 = orbit_state_at(orbit, f).omega;
    const double k2 = orbit_state_at(orbit, f + 0.5 * dt * k1).omega;
    const double k3 = orbit_state_at(orbit, f + 0.5 * dt * k2).omega;
    const double k4 = orbit_state_at(orbit, f + dt * k3).omega;
    return orbit_state_at(orbit, f + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

LosDerivative los_rhs(const LosState& x, const TranslationInput& u, const OrbitState& orb) {
    const double rho = x.rho;
    const double eps_dot = x.rho_epsdot / rho;
    const double beta_dot = x.rho_betadot / rho;
    const double se = std::sin(x.eps), ce = std::cos(x.eps);
    const double sb = std::sin(x.beta), cb = std::cos(x.beta);
    const double om = orb.omega;
    const double g = orb.grav;

    const double rel = beta_dot - om;
    const double rho_dd = rho * eps_dot * eps_dot + rho * rel * rel * ce * ce -
                          g * (rho - 3.0 * rho * ce * ce * sb * sb) + u.u_rho;
    const double eps_dd = (-2.0 * x.rho_dot * eps_dot - rho * rel * rel * se * ce -
                           3.0 * g * rho * se * ce * sb * sb + u.u_eps) /
                          rho;
    const double beta_dd = orb.omega_dot - 2.0 * x.rho_dot * rel / rho +
                           2.0 * eps_dot * rel * se / ce + 3.0 * g * sb * cb -
                           u.u_beta / (rho * ce);

    LosDerivative d;
    d.dx << x.rho_dot, eps_dot, beta_dot, rho_dd,
        x.rho_dot * eps_dot + rho * eps_dd, x.rho_dot * beta_dot + rho * beta_dd;
    d.accels = Vec3(rho_dd, eps_dd, beta_dd);
    return d;
}

void los_jacobians(const LosState& x, const OrbitState& orb, Mat66& Ac, Mat63& Bc) {
    const double rho = guarded_rho(x.rho);
    const double x5 = x.rho_epsdot, x6 = x.rho_betadot;
    const double se = std::sin(x.eps), ce = std::cos(x.eps);
    const double sb = std::sin(x.beta), cb = std::cos(x.beta);
    const double om = orb.omega;
    const double g = orb.grav;

    Ac.setZero();
    Bc.setZero();
    Ac(0, 3) = 1.0;
    Ac(1, 4) = 1.0 / rho;
    Ac(2, 5) = 1.0 / rho;
    Ac(3, 0) = om * om * ce * ce - g * (1.0 - 3.0 * ce * ce * sb * sb);
    Ac(3, 4) = x5 / rho;
    Ac(3, 5) = (-2.0 * om + x6 / rho) * ce * ce;
    Ac(4, 0) = (-om * om - 3.0 * g * sb * sb) * ce * se;
    Ac(4, 3) = -x5 / rho;
    Ac(4, 5) = (2.0 * om - x6 / rho) * ce * se;
    Ac(5, 0) = orb.omega_dot + 3.0 * g * sb * cb;
    Ac(5, 3) = 2.0 * om - x6 / rho;
    Ac(5, 4) = 2.0 * std::tan(x.eps) * (-om + x6 / rho);
    Bc(3, 0) = 1.0;
    Bc(4, 1) = 1.0;
    Bc(5, 2) = -1.0 / ce;
}

Vec3 los_to_lvlh(const LosState& x) {
    const double ce = std::cos(x.eps), se = std::sin(x.eps);
    const double cb = std::cos(x.beta), sb = std::sin(x.beta);
    return x.rho * Vec3(ce * cb, ce * sb, -se);
}

VecX rk4_step(const std::function<VecX(const VecX&, const VecX&)>& rhs, const VecX& state,
              const VecX& u, double dt) {
    const VecX k1 = rhs(state, u);
    const VecX k2 = rhs(state + 0.5 * dt * k1, u);
    const VecX k3 = rhs(state + 0.5 * dt * k2, u);
    const VecX k4 = rhs(state + dt * k3, u);
    return state + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace dockmpc
