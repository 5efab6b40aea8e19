#include "dockmpc/attitude_dynamics.hpp"

#include <cmath>

#include "dockmpc/los_dynamics.hpp"

namespace dockmpc {

namespace {

constexpr double kGimbalGuard = 1e-9;

}  // namespace

void InertiaParams::validate() const {
    for (int i = 0; i < 3; ++i) {
        if (!(J[i] > 0.0)) throw ValidationError("inertia.J entries must be positive");
        if (!(Jw[i] > 0.0)) throw ValidationError("inertia.Jw entries must be positive");
        if (!(Jw[i] < J[i])) {
            throw ValidationError("inertia.Jw entries must be smaller than inertia.J");
        }
    }
}

void AttitudeState::check_guards() const {
    if (!vec().allFinite()) {
        throw NonFiniteError("attitude state contains non-finite entries");
    }
    if (std::abs(theta) >= kPi / 2.0 - kGimbalGuard) {
        throw GimbalLockError("pitch theta reached +/-90 deg");
    }
}

Mat3 euler_rate_matrix(double phi, double theta) {
    const double sp = std::sin(phi), cp = std::cos(phi);
    const double ct = std::cos(theta);
    if (std::abs(ct) < kGimbalGuard) {
        throw GimbalLockError("Euler-rate matrix undefined at |theta| = 90 deg");
    }
    const double tt = std::tan(theta);
    Mat3 T;
    T << 1.0, sp * tt, cp * tt,
         0.0, cp, -sp,
         0.0, sp / ct, cp / ct;
    return T;
}

Vec6 attitude_rhs(const AttitudeState& x, const WheelInput& u, const InertiaParams& inertia) {
    const double J1 = inertia.J[0], J2 = inertia.J[1], J3 = inertia.J[2];
    const Vec3 w(x.w1, x.w2, x.w3);
    const Vec3 dang = euler_rate_matrix(x.phi, x.theta) * w;
    const Vec3 coupling((J2 - J3) * x.w2 * x.w3 / J1,
                        (J3 - J1) * x.w1 * x.w3 / J2,
                        (J1 - J2) * x.w1 * x.w2 / J3);
    const Vec3 dw = coupling + inertia.input_gain().cwiseProduct(u.vec());
    Vec6 dx;
    dx << dang, dw;
    return dx;
}

Vec3 attitude_angle_accels(const AttitudeState& x, const WheelInput& u,
                           const InertiaParams& inertia, double dt) {
    const auto rhs = [&inertia](const VecX& s, const VecX& uu) -> VecX {
        return attitude_rhs(AttitudeState::from_vec(s), WheelInput{uu[0], uu[1], uu[2]},
                            inertia);
    };
    const Vec6 dx_now = attitude_rhs(x, u, inertia);
    const VecX x_plus = rk4_step(rhs, x.vec(), u.vec(), dt);
    const Vec6 dx_plus = attitude_rhs(AttitudeState::from_vec(x_plus), u, inertia);
    return (dx_plus.head<3>() - dx_now.head<3>()) / dt;
}

void attitude_jacobians(const AttitudeState& x, const InertiaParams& inertia,
                        Mat66& Ac, Mat63& Bc) {
    const double J1 = inertia.J[0], J2 = inertia.J[1], J3 = inertia.J[2];
    Ac.setZero();
    Bc.setZero();
    Ac.block<3, 3>(0, 3) = euler_rate_matrix(x.phi, x.theta);
    Ac(3, 4) = x.w3 * (J2 - J3) / J1;
    Ac(4, 5) = x.w1 * (J3 - J1) / J2;
    Ac(5, 3) = x.w2 * (J1 - J2) / J3;
    const Vec3 gain = inertia.input_gain();
    Bc(3, 0) = gain[0];
    Bc(4, 1) = gain[1];
    Bc(5, 2) = gain[2];
}

}  // namespace dockmpc
