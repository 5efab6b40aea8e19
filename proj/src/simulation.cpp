#include "dockmpc/simulation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

namespace dockmpc {

namespace {

constexpr double kViolationAllowance = 1e-9;
constexpr int kQpMaxIter = 500;
constexpr double kQpTol = 1e-8;

double principal_angle(double x) { return std::remainder(x, 2.0 * kPi); }

WrapDirection horizon_direction(const VecX& raw) {
    const double d = raw[raw.size() - 1] - raw[0];
    if (d > 1e-12) return WrapDirection::Increasing;
    if (d < -1e-12) return WrapDirection::Decreasing;
    return WrapDirection::None;
}

// Controller-side state that persists across control steps.
struct ControllerState {
    VecX u_prev;
    VecX dplan;               // input increments from the last solve
    std::vector<Vec6> xplan;  // predicted states at k+1..k+Np from the last solve
    std::vector<int> active;  // last active set (the row layout is identical every step)
    bool has_plan = false;
    Rng rng;

    ControllerState(int m, int Nc, std::uint64_t seed, std::uint64_t stream)
        : u_prev(VecX::Zero(m)), dplan(VecX::Zero(m * Nc)), rng(seed, stream) {}
};

struct SolveInputs {
    const MpcTuning* tuning = nullptr;
    VecX q_diag;     // state weights for this step (length n)
    VecX xd_stack;   // desired states at k+1..k+Np, stacked (n*Np)
    Vec6 x;
    Vec3 accel_signs;
    Vec3 umax;
    bool sampling = false;
};

struct SolveOutput {
    Vec3 u;
    std::vector<Vec6> xplan;
    QpStatus status = QpStatus::Optimal;
    int iterations = 0;
    int relaxed = 0;
};

using JacobianFn = std::function<void(const Vec6&, int, Mat66&, Mat63&)>;
using StateConstraintFn = std::function<std::vector<LinearInequalities>(const PredictionOperators&)>;

SolveOutput run_solve(ControllerState& cs, const SolveInputs& in, const JacobianFn& jac,
                      const StateConstraintFn& state_constraints, bool frozen) {
    const int Np = in.tuning->Np;
    const int Nc = in.tuning->Nc;
    const int n = 6;
    const int m = 3;

    // Linearize along the previous predicted trajectory shifted by one step;
    // at the very first step there is no plan so the current state is used
    // for the whole horizon.
    std::vector<Vec6> xs(Np);
    if (frozen || !cs.has_plan) {
        for (auto& v : xs) v = in.x;
    } else {
        for (int i = 0; i + 1 < Np; ++i) xs[i] = cs.xplan[i + 1];
        xs[Np - 1] = cs.xplan[Np - 1];
    }

    std::vector<DiscreteModel> models(Np);
    Mat66 Ac;
    Mat63 Bc;
    for (int i = 0; i < Np; ++i) {
        jac(xs[i], i, Ac, Bc);
        models[i] = discretize(Ac, Bc, in.tuning->Ts);
    }
    PredictionOperators ops = build_operators(models, Nc);

    if (in.sampling) {
        for (int i = 0; i < Nc; ++i) {
            Vec3 input_signs;
            for (int j = 0; j < 3; ++j) {
                input_signs[j] = sgn(in.xd_stack[n * i + j] - xs[i][j]);
            }
            ops.Wstar.block<3, 3>(m * i, m * i) =
                sampling_block(in.tuning->ws, in.accel_signs, input_signs, cs.rng);
        }
    }

    MatX Qt = MatX::Zero(n * Np, n * Np);
    for (int i = 0; i < Np; ++i) Qt.diagonal().segment(n * i, n) = in.q_diag;
    MatX Pt = MatX::Zero(m * Nc, m * Nc);
    for (int i = 0; i < Nc; ++i) Pt.diagonal().segment(m * i, m) = in.tuning->P;

    CondensedCost cost = assemble_cost(ops, in.x, cs.u_prev, in.xd_stack, Qt, Pt);

    std::vector<LinearInequalities> parts;
    parts.push_back(input_ineq(ops.Lambda, ops.Gamma, cs.u_prev, in.umax, Nc));
    const int hard_rows = parts.front().rows();
    for (auto& part : state_constraints(ops)) parts.push_back(std::move(part));
    LinearInequalities ineq = stack(parts);

    QpProblem prob;
    prob.H = std::move(cost.H);
    prob.f = std::move(cost.f);
    prob.G = std::move(ineq.G);
    prob.g = std::move(ineq.g);
    prob.soft.assign(static_cast<std::size_t>(prob.g.size()), true);
    std::fill(prob.soft.begin(), prob.soft.begin() + hard_rows, false);

    QpWarmStart warm;
    warm.z0 = VecX::Zero(m * Nc);
    if (cs.has_plan) {
        warm.z0.head(m * (Nc - 1)) = cs.dplan.tail(m * (Nc - 1));
        warm.active_hint = cs.active;
    }
    QpSolution sol = solve_qp(prob, kQpTol, kQpMaxIter, &warm);

    SolveOutput out;
    VecX plan = VecX::Zero(m * Nc);
    VecX acc = cs.u_prev;
    for (int i = 0; i < Nc; ++i) {
        acc += sol.z.segment(m * i, m);
        plan.segment(m * i, m) = acc;
    }
    // The actuator saturates at the box limit, so numerical dust from the
    // solver never accumulates in u_prev and the next step always starts
    // from an input-feasible point.
    out.u = plan.head<3>().cwiseMax(-in.umax).cwiseMin(in.umax);

    out.xplan.resize(Np);
    Vec6 xp = in.x;
    for (int i = 0; i < Np; ++i) {
        const Vec3 ui = i < Nc ? Vec3(plan.segment<3>(m * i)) : Vec3(Vec3::Zero());
        xp = models[i].Ad * xp + models[i].Bd * ui;
        out.xplan[i] = xp;
    }
    out.status = sol.status;
    out.iterations = sol.iterations;
    out.relaxed = sol.relaxed_rows;

    cs.u_prev = out.u;
    cs.dplan = std::move(sol.z);
    cs.xplan = out.xplan;
    cs.active = std::move(sol.active_set);
    cs.has_plan = true;
    return out;
}

}  // namespace

const char* control_mode_name(ControlMode mode) {
    return mode == ControlMode::Standard ? "standard" : "sampling";
}

void Scenario::validate() const {
    orbit.validate();
    inertia.validate();
    limits.validate();
    tuning_p.validate(6, 3);
    tuning_a.validate(6, 3);
    if (tuning_p.Np != tuning_a.Np || tuning_p.Nc != tuning_a.Nc || tuning_p.Ts != tuning_a.Ts) {
        throw ValidationError("position and attitude controllers must share Np, Nc and Ts");
    }
    if (rho_d < limits.r_safe) {
        throw ValidationError("desired hold range lies inside the keep-out sphere");
    }
    if (duration <= 0.0) throw ValidationError("duration must be positive");
    if (conv_pos_threshold <= 0.0 || conv_att_threshold_deg <= 0.0) {
        throw ValidationError("convergence thresholds must be positive");
    }
    x0_p.check_guards();
    x0_a.check_guards();
}

const std::vector<std::string>& TrajectoryLog::csv_columns() {
    static const std::vector<std::string> cols = {
        "t",
        "rho", "eps", "beta", "rho_dot", "rho_epsdot", "rho_betadot",
        "phi", "theta", "psi", "w1", "w2", "w3",
        "rho_d", "eps_d", "beta_d", "rho_dot_d", "rho_epsdot_d", "rho_betadot_d",
        "phi_d", "theta_d", "psi_d", "w1_d", "w2_d", "w3_d",
        "u_rho", "u_eps", "u_beta", "u_phi", "u_theta", "u_psi",
        "range_margin", "cone_eps_margin", "cone_beta_margin",
        "fov_roll_margin", "fov_pitch_margin", "fov_yaw_margin",
        "status_p", "iters_p", "relax_p", "status_a", "iters_a", "relax_a",
        "wrap_beta", "wrap_psi", "wrap_phi",
        "carried_beta", "carried_psi", "carried_phi",
    };
    return cols;
}

SimResult run_closed_loop(const Scenario& scenario) {
    scenario.validate();

    const int Np = scenario.tuning_p.Np;
    const int Nc = scenario.tuning_p.Nc;
    const double Ts = scenario.tuning_p.Ts;
    const int nsteps = static_cast<int>(std::lround(scenario.duration / Ts));
    const bool sampling = scenario.mode == ControlMode::Sampling;

    std::vector<OrbitState> orb(static_cast<std::size_t>(nsteps + Np + 1));
    orb[0] = orbit_state_at(scenario.orbit, scenario.orbit.f0);
    for (int k = 0; k + 1 < static_cast<int>(orb.size()); ++k) {
        orb[k + 1] = propagate_orbit(scenario.orbit, orb[k], Ts);
    }

    LosState x_p = scenario.x0_p;
    AttitudeState x_a = scenario.x0_a;
    Vec3 target_att = scenario.target.initial_attitude;

    ControllerState cp(3, Nc, scenario.seed, 0);
    ControllerState ca(3, Nc, scenario.seed, 1);

    WrapChannel ch_beta, ch_psi, ch_phi;
    WrapChannel ch_eps, ch_theta;
    ch_eps.n_x = ch_theta.n_x = 0.5;
    ch_eps.error_if_triggered = ch_theta.error_if_triggered = true;

    TrajectoryLog log;
    log.scenario_name = scenario.name;
    log.Ts = Ts;
    log.steps.reserve(static_cast<std::size_t>(nsteps));

    for (int k = 0; k < nsteps; ++k) {
        const double t = k * Ts;
        const auto poses =
            desired_horizon(target_att, scenario.target, t, Np, Ts, scenario.rho_d);

        VecX raw_eps(Np + 1), raw_beta(Np + 1), raw_phi(Np + 1), raw_theta(Np + 1),
            raw_psi(Np + 1);
        for (int i = 0; i <= Np; ++i) {
            raw_eps[i] = poses[i].x_dp[1];
            raw_beta[i] = poses[i].x_dp[2];
            raw_phi[i] = poses[i].x_da[0];
            raw_theta[i] = poses[i].x_da[1];
            raw_psi[i] = poses[i].x_da[2];
        }

        wrap_step(ch_eps, x_p.eps, raw_eps, horizon_direction(raw_eps));
        wrap_step(ch_theta, x_a.theta, raw_theta, horizon_direction(raw_theta));

        const WrapResult rb = wrap_step(ch_beta, x_p.beta, raw_beta, horizon_direction(raw_beta));
        ch_beta = rb.channel;
        x_p.beta = rb.x;
        if (rb.reset && cp.has_plan) {
            for (auto& v : cp.xplan) v[2] += rb.shift_applied;
        }
        const WrapResult rpsi = wrap_step(ch_psi, x_a.psi, raw_psi, horizon_direction(raw_psi));
        ch_psi = rpsi.channel;
        x_a.psi = rpsi.x;
        if (rpsi.reset && ca.has_plan) {
            for (auto& v : ca.xplan) v[2] += rpsi.shift_applied;
        }
        const WrapResult rphi = wrap_step(ch_phi, x_a.phi, raw_phi, horizon_direction(raw_phi));
        ch_phi = rphi.channel;
        x_a.phi = rphi.x;
        if (rphi.reset && ca.has_plan) {
            for (auto& v : ca.xplan) v[0] += rphi.shift_applied;
        }

        VecX xd_p(6 * Np), xd_a(6 * Np);
        for (int i = 1; i <= Np; ++i) {
            Vec6 dp = poses[i].x_dp;
            dp[2] = rb.xd[i];
            Vec6 da = poses[i].x_da;
            da[0] = rphi.xd[i];
            da[2] = rpsi.xd[i];
            xd_p.segment<6>(6 * (i - 1)) = dp;
            xd_a.segment<6>(6 * (i - 1)) = da;
        }

        const TranslationInput up_prev{cp.u_prev[0], cp.u_prev[1], cp.u_prev[2]};
        const WheelInput ua_prev{ca.u_prev[0], ca.u_prev[1], ca.u_prev[2]};
        const Vec3 sa_p = los_rhs(x_p, up_prev, orb[k]).accels.unaryExpr(&sgn);
        const Vec3 sa_a =
            attitude_angle_accels(x_a, ua_prev, scenario.inertia, Ts).unaryExpr(&sgn);

        SolveInputs ip;
        ip.tuning = &scenario.tuning_p;
        // Rate-channel weights are divided by the current range so that the
        // angular-rate costs stay scale-free as the chaser closes in.
        ip.q_diag = scenario.tuning_p.Q;
        ip.q_diag[3] /= x_p.rho;
        ip.q_diag[4] /= x_p.rho;
        ip.q_diag[5] /= x_p.rho;
        ip.xd_stack = xd_p;
        ip.x = x_p.vec();
        ip.accel_signs = sa_p;
        ip.umax = scenario.limits.umax_p;
        ip.sampling = sampling;

        const JacobianFn jac_p = [&](const Vec6& s, int i, Mat66& A, Mat63& B) {
            los_jacobians(LosState::from_vec(s), orb[k + i], A, B);
        };
        const StateConstraintFn cons_p = [&](const PredictionOperators& ops) {
            std::vector<LinearInequalities> v;
            v.push_back(
                collision_ineq(ops, x_p.vec(), cp.u_prev, scenario.limits.r_safe, Np));
            VecX theta_t(Np), psi_t(Np);
            for (int i = 1; i <= Np; ++i) {
                theta_t[i - 1] = poses[i].x_dp[1];
                psi_t[i - 1] = -rb.xd[i];
            }
            v.push_back(cone_ineq(ops, x_p.vec(), cp.u_prev, theta_t, psi_t,
                                  scenario.limits.gamma_e, Np));
            return v;
        };
        const SolveOutput sp = run_solve(cp, ip, jac_p, cons_p, k == 0);

        // The attitude boresight tracks the fresh translation plan; the yaw
        // centers are mapped into the yaw channel's representation (the two
        // channels wrap independently and may sit whole turns apart).
        VecX eps_nom(Np), beta_nom(Np);
        const double turns =
            std::round((x_a.psi + sp.xplan[0][2]) / (2.0 * kPi));
        for (int i = 0; i < Np; ++i) {
            eps_nom[i] = sp.xplan[i][1];
            beta_nom[i] = sp.xplan[i][2] - 2.0 * kPi * turns;
        }

        SolveInputs ia;
        ia.tuning = &scenario.tuning_a;
        ia.q_diag = scenario.tuning_a.Q;
        ia.xd_stack = xd_a;
        ia.x = x_a.vec();
        ia.accel_signs = sa_a;
        ia.umax = scenario.limits.umax_a;
        ia.sampling = sampling;

        const JacobianFn jac_a = [&](const Vec6& s, int, Mat66& A, Mat63& B) {
            attitude_jacobians(AttitudeState::from_vec(s), scenario.inertia, A, B);
        };
        const StateConstraintFn cons_a = [&](const PredictionOperators& ops) {
            std::vector<LinearInequalities> v;
            v.push_back(fov_ineq(ops, x_a.vec(), ca.u_prev, eps_nom, beta_nom,
                                 scenario.limits.gamma_f, Np));
            return v;
        };
        const SolveOutput sa = run_solve(ca, ia, jac_a, cons_a, k == 0);

        // Truth propagation: the translation plant integrates the true
        // anomaly jointly so the orbit quantities track inside the step.
        const auto joint_rhs = [&](const VecX& s, const VecX& u) -> VecX {
            const OrbitState os = orbit_state_at(scenario.orbit, s[6]);
            const LosDerivative d =
                los_rhs(LosState::from_vec(s.head<6>()), TranslationInput{u[0], u[1], u[2]}, os);
            VecX dy(7);
            dy << d.dx, os.omega;
            return dy;
        };
        VecX y(7);
        y << x_p.vec(), orb[k].f;
        y = rk4_step(joint_rhs, y, sp.u, Ts);
        x_p = LosState::from_vec(y.head<6>());

        const auto att_rhs_fn = [&](const VecX& s, const VecX& u) -> VecX {
            return attitude_rhs(AttitudeState::from_vec(s), WheelInput{u[0], u[1], u[2]},
                                scenario.inertia);
        };
        x_a = AttitudeState::from_vec(rk4_step(att_rhs_fn, x_a.vec(), sa.u, Ts));

        x_p.check_guards();
        x_a.check_guards();
        target_att = advance_target(target_att, scenario.target, t, Ts);

        StepRecord rec;
        rec.t = t + Ts;
        rec.x_p = x_p.vec();
        rec.x_a = x_a.vec();
        rec.xd_p = poses[1].x_dp;
        rec.xd_p[2] = rb.xd[1];
        rec.xd_a = poses[1].x_da;
        rec.xd_a[0] = rphi.xd[1];
        rec.xd_a[2] = rpsi.xd[1];
        rec.u_p = sp.u;
        rec.u_a = sa.u;
        rec.range_margin = x_p.rho - scenario.limits.r_safe;
        rec.cone_eps_margin = scenario.limits.gamma_e - std::abs(x_p.eps - poses[1].x_dp[1]);
        rec.cone_beta_margin = scenario.limits.gamma_e - std::abs(x_p.beta - rb.xd[1]);
        rec.fov_roll_margin = (kPi + 2.0 * kWrapDelta) - std::abs(x_a.phi);
        rec.fov_pitch_margin = scenario.limits.gamma_f - std::abs(x_a.theta - x_p.eps);
        rec.fov_yaw_margin =
            scenario.limits.gamma_f - std::abs(principal_angle(x_a.psi + x_p.beta));
        rec.status_p = sp.status;
        rec.iters_p = sp.iterations;
        rec.relax_p = sp.relaxed;
        rec.status_a = sa.status;
        rec.iters_a = sa.iterations;
        rec.relax_a = sa.relaxed;
        rec.wrap_beta = rb.branch;
        rec.wrap_psi = rpsi.branch;
        rec.wrap_phi = rphi.branch;
        rec.carried_beta = rb.reset ? rb.channel.carried_error : 0.0;
        rec.carried_psi = rpsi.reset ? rpsi.channel.carried_error : 0.0;
        rec.carried_phi = rphi.reset ? rphi.channel.carried_error : 0.0;
        log.steps.push_back(rec);
    }

    SimResult out;
    out.log = std::move(log);
    out.metrics = compute_metrics(out.log, scenario);
    return out;
}

namespace {

struct ErrorSeries {
    // rho, eps, beta, phi, theta, psi tracking errors per step.
    std::vector<std::array<double, 6>> e;

    explicit ErrorSeries(const TrajectoryLog& log) {
        e.reserve(log.steps.size());
        for (const auto& s : log.steps) {
            e.push_back({s.x_p[0] - s.xd_p[0], s.x_p[1] - s.xd_p[1], s.x_p[2] - s.xd_p[2],
                         s.x_a[0] - s.xd_a[0], s.x_a[1] - s.xd_a[1], s.x_a[2] - s.xd_a[2]});
        }
    }
};

ChannelMetrics channel_metrics(const TrajectoryLog& log, const ErrorSeries& err, int ch,
                               double threshold) {
    ChannelMetrics cm;
    const int N = static_cast<int>(log.steps.size());

    int last_bad = -1;
    for (int k = 0; k < N; ++k) {
        if (std::abs(err.e[k][ch]) >= threshold) last_bad = k;
    }
    if (last_bad < 0) {
        cm.conv_time = 0.0;
    } else if (last_bad == N - 1) {
        cm.conv_time = -1.0;
    } else {
        cm.conv_time = log.steps[last_bad].t + log.Ts;
    }

    int first = -1;
    for (int k = 0; k < N; ++k) {
        if (std::abs(err.e[k][ch]) > 1e-9) {
            first = k;
            break;
        }
    }
    if (first >= 0) {
        const double s0 = err.e[first][ch] > 0.0 ? 1.0 : -1.0;
        double os = 0.0;
        for (int k = 0; k < N; ++k) os = std::max(os, -s0 * err.e[k][ch]);
        cm.overshoot = os;
    }

    const double t_tail = cm.conv_time > 0.0 ? cm.conv_time : 0.0;
    double sumsq = 0.0;
    int count = 0;
    for (int k = 0; k < N; ++k) {
        if (log.steps[k].t >= t_tail) {
            sumsq += err.e[k][ch] * err.e[k][ch];
            ++count;
        }
    }
    if (count > 0) cm.ss_rms = std::sqrt(sumsq / count);
    return cm;
}

}  // namespace

Metrics compute_metrics(const TrajectoryLog& log, const Scenario& scenario) {
    Metrics m;
    const int N = static_cast<int>(log.steps.size());
    if (N == 0) return m;
    const double Ts = log.Ts;
    const ErrorSeries err(log);

    const double att_thr = deg2rad(scenario.conv_att_threshold_deg);
    const double thr[6] = {scenario.conv_pos_threshold, att_thr, att_thr,
                           att_thr, att_thr, att_thr};
    ChannelMetrics* chans[6] = {&m.rho, &m.eps, &m.beta, &m.phi, &m.theta, &m.psi};
    for (int ch = 0; ch < 6; ++ch) *chans[ch] = channel_metrics(log, err, ch, thr[ch]);

    std::vector<double> lvlh_err(N);
    for (int k = 0; k < N; ++k) {
        const auto& s = log.steps[k];
        lvlh_err[k] = (los_to_lvlh(LosState::from_vec(s.x_p)) -
                       los_to_lvlh(LosState::from_vec(s.xd_p)))
                          .norm();
    }
    int last_bad_pos = -1, last_bad_att = -1;
    for (int k = 0; k < N; ++k) {
        if (lvlh_err[k] >= scenario.conv_pos_threshold) last_bad_pos = k;
        const double ea = std::max({std::abs(err.e[k][3]), std::abs(err.e[k][4]),
                                    std::abs(err.e[k][5])});
        if (ea >= att_thr) last_bad_att = k;
    }
    const auto conv_of = [&](int last_bad) {
        if (last_bad < 0) return 0.0;
        if (last_bad == N - 1) return -1.0;
        return log.steps[last_bad].t + Ts;
    };
    m.conv_time_pos = conv_of(last_bad_pos);
    m.conv_time_att = conv_of(last_bad_att);

    const double t_end = log.steps.back().t;
    double sumsq = 0.0;
    int count = 0;
    for (int k = 0; k < N; ++k) {
        if (log.steps[k].t >= t_end - 100.0) {
            sumsq += lvlh_err[k] * lvlh_err[k];
            ++count;
        }
    }
    m.lvlh_rms = std::sqrt(sumsq / count);

    const double t_att_tail = m.conv_time_att > 0.0 ? m.conv_time_att : 0.0;
    for (int k = 0; k < N; ++k) {
        if (log.steps[k].t >= t_att_tail) {
            const double ea = std::max({std::abs(err.e[k][3]), std::abs(err.e[k][4]),
                                        std::abs(err.e[k][5])});
            m.att_peak_deg = std::max(m.att_peak_deg, rad2deg(ea));
        }
    }

    m.min_rho = log.steps[0].x_p[0];
    double mae_e = 0.0, mae_b = 0.0;
    int mae_n = 0;
    for (int k = 0; k < N; ++k) {
        const auto& s = log.steps[k];
        m.min_rho = std::min(m.min_rho, s.x_p[0]);
        m.peak_beta_dev_deg = std::max(m.peak_beta_dev_deg, rad2deg(std::abs(err.e[k][2])));
        if (s.t <= 20.0) {
            mae_e += std::abs(err.e[k][1]);
            mae_b += std::abs(err.e[k][2]);
            ++mae_n;
        }

        for (int j = 0; j < 3; ++j) {
            const double vp = std::abs(s.u_p[j]) - scenario.limits.umax_p[j];
            const double va = std::abs(s.u_a[j]) - scenario.limits.umax_a[j];
            const double v = std::max(vp, va);
            auto& worst = m.max_violation[static_cast<int>(RowFamily::Input)];
            worst = std::max(worst, std::max(0.0, v));
        }
        const auto fold = [&](RowFamily fam, double margin) {
            auto& worst = m.max_violation[static_cast<int>(fam)];
            worst = std::max(worst, std::max(0.0, -margin));
        };
        fold(RowFamily::Collision, s.range_margin);
        fold(RowFamily::ConeEps, s.cone_eps_margin);
        fold(RowFamily::ConeBeta, s.cone_beta_margin);
        fold(RowFamily::FovRoll, s.fov_roll_margin);
        fold(RowFamily::FovPitch, s.fov_pitch_margin);
        fold(RowFamily::FovYaw, s.fov_yaw_margin);

        const bool cone_bad = s.cone_eps_margin < -kViolationAllowance ||
                              s.cone_beta_margin < -kViolationAllowance;
        const bool fov_bad = s.fov_roll_margin < -kViolationAllowance ||
                             s.fov_pitch_margin < -kViolationAllowance ||
                             s.fov_yaw_margin < -kViolationAllowance;
        if (cone_bad) {
            ++m.cone_violations;
            if (s.relax_p == 0) ++m.cone_violations_unrelaxed;
        }
        if (fov_bad) {
            ++m.fov_violations;
            if (s.relax_a == 0) ++m.fov_violations_unrelaxed;
        }
        if (s.relax_p > 0) ++m.relax_steps_p;
        if (s.relax_a > 0) ++m.relax_steps_a;

        if (s.wrap_beta != WrapBranch::NoEvent || s.wrap_psi != WrapBranch::NoEvent ||
            s.wrap_phi != WrapBranch::NoEvent) {
            ++m.wrap_resets;
        }
        const double carried = std::max({std::abs(s.carried_beta), std::abs(s.carried_psi),
                                         std::abs(s.carried_phi)});
        m.max_carried_error_deg = std::max(m.max_carried_error_deg, rad2deg(carried));
    }
    if (mae_n > 0) {
        m.transit_mae_eps_deg = rad2deg(mae_e / mae_n);
        m.transit_mae_beta_deg = rad2deg(mae_b / mae_n);
    }
    return m;
}

bool logs_identical(const TrajectoryLog& a, const TrajectoryLog& b, int* first_diff) {
    const auto differ = [&](int idx) {
        if (first_diff != nullptr) *first_diff = idx;
        return false;
    };
    const auto veq = [](const auto& u, const auto& v) { return (u.array() == v.array()).all(); };
    if (a.scenario_name != b.scenario_name || a.Ts != b.Ts ||
        a.steps.size() != b.steps.size()) {
        return differ(-1);
    }
    for (std::size_t k = 0; k < a.steps.size(); ++k) {
        const auto& x = a.steps[k];
        const auto& y = b.steps[k];
        const bool same =
            x.t == y.t && veq(x.x_p, y.x_p) && veq(x.x_a, y.x_a) && veq(x.xd_p, y.xd_p) &&
            veq(x.xd_a, y.xd_a) && veq(x.u_p, y.u_p) && veq(x.u_a, y.u_a) &&
            x.range_margin == y.range_margin && x.cone_eps_margin == y.cone_eps_margin &&
            x.cone_beta_margin == y.cone_beta_margin &&
            x.fov_roll_margin == y.fov_roll_margin &&
            x.fov_pitch_margin == y.fov_pitch_margin &&
            x.fov_yaw_margin == y.fov_yaw_margin && x.status_p == y.status_p &&
            x.iters_p == y.iters_p && x.relax_p == y.relax_p && x.status_a == y.status_a &&
            x.iters_a == y.iters_a && x.relax_a == y.relax_a && x.wrap_beta == y.wrap_beta &&
            x.wrap_psi == y.wrap_psi && x.wrap_phi == y.wrap_phi &&
            x.carried_beta == y.carried_beta && x.carried_psi == y.carried_psi &&
            x.carried_phi == y.carried_phi;
        if (!same) return differ(static_cast<int>(k));
    }
    return true;
}

ModeComparison compare_logs(const TrajectoryLog& a, const TrajectoryLog& b,
                            const Scenario& scenario, const std::string& label_a,
                            const std::string& label_b) {
    if (a.scenario_name != b.scenario_name) {
        throw ScenarioMismatchError("cannot compare logs from different scenarios: '" +
                                    a.scenario_name + "' vs '" + b.scenario_name + "'");
    }
    if (a.Ts != b.Ts || a.steps.size() != b.steps.size()) {
        throw ScenarioMismatchError("cannot compare logs with different step grids");
    }

    ModeComparison c;
    c.scenario_name = a.scenario_name;
    c.label_a = label_a;
    c.label_b = label_b;
    c.metrics_a = compute_metrics(a, scenario);
    c.metrics_b = compute_metrics(b, scenario);

    const ChannelMetrics* ca[6] = {&c.metrics_a.rho, &c.metrics_a.eps, &c.metrics_a.beta,
                                   &c.metrics_a.phi, &c.metrics_a.theta, &c.metrics_a.psi};
    const ChannelMetrics* cb[6] = {&c.metrics_b.rho, &c.metrics_b.eps, &c.metrics_b.beta,
                                   &c.metrics_b.phi, &c.metrics_b.theta, &c.metrics_b.psi};
    const ErrorSeries ea(a), eb(b);
    for (int ch = 0; ch < 6; ++ch) {
        c.overshoot_delta[ch] = cb[ch]->overshoot - ca[ch]->overshoot;
        c.conv_time_delta[ch] = cb[ch]->conv_time - ca[ch]->conv_time;
        double sa = 0.0, sb = 0.0;
        for (std::size_t k = 0; k < a.steps.size(); ++k) {
            sa += std::abs(ea.e[k][ch]);
            sb += std::abs(eb.e[k][ch]);
        }
        c.mean_abs_err_a[ch] = sa / static_cast<double>(a.steps.size());
        c.mean_abs_err_b[ch] = sb / static_cast<double>(b.steps.size());
    }
    return c;
}

}  // namespace dockmpc
