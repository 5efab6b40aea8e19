// Constraint families expressed as stacked linear inequalities
// G * delta_u_tilde <= g over the control horizon.
#pragma once

#include <vector>

#include "dockmpc/linalg.hpp"
#include "dockmpc/prediction.hpp"

namespace dockmpc {

struct ConstraintParams {
    Vec3 umax_p = Vec3(3.0, 3.0, 3.0);  // thrust bound per channel (m/s^2)
    Vec3 umax_a = Vec3(1.0, 1.0, 1.0);  // wheel acceleration bound (rad/s^2)
    double r_safe = 6.0;                // keep-out radius (m)
    double gamma_e = 0.0;               // entry-cone half angle (rad)
    double gamma_f = 0.0;               // field-of-view half angle (rad)

    void validate() const;
};

enum class RowFamily : int {
    Input = 0,
    Collision = 1,
    ConeEps = 2,
    ConeBeta = 3,
    FovRoll = 4,
    FovPitch = 5,
    FovYaw = 6,
};

const char* row_family_name(RowFamily f);

struct LinearInequalities {
    MatX G;                          // rows x (m*Nc)
    VecX g;                          // rows
    std::vector<RowFamily> labels;   // one per row

    int rows() const { return static_cast<int>(g.size()); }
};

// Absolute input bounds folded onto the increments:
// rows [Gamma; -Gamma], g = [umax_tilde - Lambda u_prev; umax_tilde + Lambda u_prev].
LinearInequalities input_ineq(const MatX& Lambda, const MatX& Gamma,
                              const VecX& u_prev, const VecX& umax, int Nc);

// Keep-out sphere: predicted range at every horizon step at least r_safe.
LinearInequalities collision_ineq(const PredictionOperators& ops, const VecX& x_k,
                                  const VecX& u_prev, double r_safe, int Np);

// Entry cone around the target's docking axis, per prediction step:
//   eps  in [max(-pi/2, theta_t - gamma_e), min(pi/2, theta_t + gamma_e)]
//   beta in [-psi_t - gamma_e, -psi_t + gamma_e]
// eps bounds are clipped to the gimbal-safe range; beta bounds follow the
// (possibly unwrapped) reference so that managed +-pi crossings stay
// feasible.  Upper rows come first within each family, then lower rows.
LinearInequalities cone_ineq(const PredictionOperators& ops, const VecX& x_k,
                             const VecX& u_prev, const VecX& theta_t,
                             const VecX& psi_t, double gamma_e, int Np);

// Field-of-view coupling to the nominal LOS plan, per prediction step:
//   roll  in [-(pi + 2 delta), pi + 2 delta]
//   pitch in [max(-pi/2, eps - gamma_f), min(pi/2, eps + gamma_f)]
//   yaw   in [-beta - gamma_f, -beta + gamma_f]
// The yaw bracket is centered on -beta, the chaser yaw that points the
// boresight down the line of sight; like the cone beta bounds it is not
// clipped at +-pi so managed crossings stay feasible.  The roll bound spans
// one full representation period widened by the wrap neighborhood (the
// representation may sit up to delta past +-pi right after a reset).
LinearInequalities fov_ineq(const PredictionOperators& ops, const VecX& x_k,
                            const VecX& u_prev, const VecX& eps_nominal,
                            const VecX& beta_nominal, double gamma_f, int Np);

// Row-wise concatenation preserving order and labels.
LinearInequalities stack(const std::vector<LinearInequalities>& parts);

}  // namespace dockmpc
