#include "dockmpc/constraints.hpp"

#include <algorithm>
#include <cmath>

#include "dockmpc/angle_wrap.hpp"

namespace dockmpc {

namespace {

// One state coordinate extracted over the horizon: the constraint rows
// G = sel(BW * Gamma) and the input-free part of the prediction
// base = sel(Astar x + BW Lambda u_prev).
struct SelectorRows {
    MatX rows;   // Np x (m*Nc)
    VecX base;   // Np
};

SelectorRows select_coordinate(const PredictionOperators& ops, const VecX& x_k,
                               const VecX& u_prev, int idx) {
    const MatX BW = ops.effective_B();
    const MatX M = BW * ops.Gamma;
    const VecX free = ops.Astar * x_k + BW * (ops.Lambda * u_prev);
    SelectorRows s;
    s.rows.resize(ops.Np, M.cols());
    s.base.resize(ops.Np);
    for (int i = 0; i < ops.Np; ++i) {
        s.rows.row(i) = M.row(ops.n * i + idx);
        s.base[i] = free[ops.n * i + idx];
    }
    return s;
}

void append_band(const SelectorRows& s, const VecX* hi, const VecX* lo, RowFamily family,
                 std::vector<LinearInequalities>& parts) {
    LinearInequalities out;
    const int Np = static_cast<int>(s.base.size());
    const int nrows = (hi ? Np : 0) + (lo ? Np : 0);
    out.G.resize(nrows, s.rows.cols());
    out.g.resize(nrows);
    int r = 0;
    if (hi) {
        out.G.middleRows(r, Np) = s.rows;
        out.g.segment(r, Np) = *hi - s.base;
        r += Np;
    }
    if (lo) {
        out.G.middleRows(r, Np) = -s.rows;
        out.g.segment(r, Np) = s.base - *lo;
    }
    out.labels.assign(static_cast<std::size_t>(nrows), family);
    parts.push_back(std::move(out));
}

void check_horizon(const PredictionOperators& ops, int Np, const char* what) {
    if (Np != ops.Np) throw DimensionMismatchError(std::string(what) + ": Np mismatch");
}

}  // namespace

void ConstraintParams::validate() const {
    if ((umax_p.array() <= 0.0).any()) throw ValidationError("umax_p must be positive");
    if ((umax_a.array() <= 0.0).any()) throw ValidationError("umax_a must be positive");
    if (!(r_safe > 0.0)) throw ValidationError("r_safe must be positive");
    if (!(gamma_e > 0.0 && gamma_e < kPi / 2.0)) {
        throw ValidationError("gamma_e must lie in (0, pi/2)");
    }
    if (!(gamma_f > 0.0 && gamma_f < kPi / 2.0)) {
        throw ValidationError("gamma_f must lie in (0, pi/2)");
    }
}

const char* row_family_name(RowFamily f) {
    switch (f) {
        case RowFamily::Input: return "input";
        case RowFamily::Collision: return "collision";
        case RowFamily::ConeEps: return "cone_eps";
        case RowFamily::ConeBeta: return "cone_beta";
        case RowFamily::FovRoll: return "fov_roll";
        case RowFamily::FovPitch: return "fov_pitch";
        case RowFamily::FovYaw: return "fov_yaw";
    }
    return "unknown";
}

LinearInequalities input_ineq(const MatX& Lambda, const MatX& Gamma, const VecX& u_prev,
                              const VecX& umax, int Nc) {
    const Eigen::Index m = Lambda.cols();
    const Eigen::Index mNc = Gamma.cols();
    if (Lambda.rows() != mNc || Gamma.rows() != mNc || u_prev.size() != m ||
        umax.size() != m || mNc != m * Nc) {
        throw DimensionMismatchError("input_ineq arguments have inconsistent shapes");
    }
    VecX um(mNc);
    for (int i = 0; i < Nc; ++i) um.segment(m * i, m) = umax;
    const VecX Lu = Lambda * u_prev;

    LinearInequalities out;
    out.G.resize(2 * mNc, mNc);
    out.G.topRows(mNc) = Gamma;
    out.G.bottomRows(mNc) = -Gamma;
    out.g.resize(2 * mNc);
    out.g.head(mNc) = um - Lu;
    out.g.tail(mNc) = um + Lu;
    out.labels.assign(static_cast<std::size_t>(2 * mNc), RowFamily::Input);
    return out;
}

LinearInequalities collision_ineq(const PredictionOperators& ops, const VecX& x_k,
                                  const VecX& u_prev, double r_safe, int Np) {
    check_horizon(ops, Np, "collision_ineq");
    const SelectorRows s = select_coordinate(ops, x_k, u_prev, 0);
    const VecX lo = VecX::Constant(Np, r_safe);
    std::vector<LinearInequalities> parts;
    append_band(s, nullptr, &lo, RowFamily::Collision, parts);
    return parts.front();
}

LinearInequalities cone_ineq(const PredictionOperators& ops, const VecX& x_k,
                             const VecX& u_prev, const VecX& theta_t, const VecX& psi_t,
                             double gamma_e, int Np) {
    check_horizon(ops, Np, "cone_ineq");
    if (theta_t.size() != Np || psi_t.size() != Np) {
        throw DimensionMismatchError("cone_ineq target horizons must have length Np");
    }
    std::vector<LinearInequalities> parts;

    const SelectorRows se = select_coordinate(ops, x_k, u_prev, 1);
    const VecX eps_hi = (theta_t.array() + gamma_e).min(kPi / 2.0).matrix();
    const VecX eps_lo = (theta_t.array() - gamma_e).max(-kPi / 2.0).matrix();
    append_band(se, &eps_hi, &eps_lo, RowFamily::ConeEps, parts);

    const SelectorRows sb = select_coordinate(ops, x_k, u_prev, 2);
    const VecX bet_hi = (-psi_t.array() + gamma_e).matrix();
    const VecX bet_lo = (-psi_t.array() - gamma_e).matrix();
    append_band(sb, &bet_hi, &bet_lo, RowFamily::ConeBeta, parts);

    return stack(parts);
}

LinearInequalities fov_ineq(const PredictionOperators& ops, const VecX& x_k,
                            const VecX& u_prev, const VecX& eps_nominal,
                            const VecX& beta_nominal, double gamma_f, int Np) {
    check_horizon(ops, Np, "fov_ineq");
    if (eps_nominal.size() != Np || beta_nominal.size() != Np) {
        throw DimensionMismatchError("fov_ineq nominal horizons must have length Np");
    }
    std::vector<LinearInequalities> parts;

    const SelectorRows sr = select_coordinate(ops, x_k, u_prev, 0);
    const double roll_bound = kPi + 2.0 * kWrapDelta;
    const VecX roll_hi = VecX::Constant(Np, roll_bound);
    const VecX roll_lo = VecX::Constant(Np, -roll_bound);
    append_band(sr, &roll_hi, &roll_lo, RowFamily::FovRoll, parts);

    const SelectorRows sp = select_coordinate(ops, x_k, u_prev, 1);
    const VecX pitch_hi = (eps_nominal.array() + gamma_f).min(kPi / 2.0).matrix();
    const VecX pitch_lo = (eps_nominal.array() - gamma_f).max(-kPi / 2.0).matrix();
    append_band(sp, &pitch_hi, &pitch_lo, RowFamily::FovPitch, parts);

    const SelectorRows sy = select_coordinate(ops, x_k, u_prev, 2);
    const VecX yaw_hi = (-beta_nominal.array() + gamma_f).matrix();
    const VecX yaw_lo = (-beta_nominal.array() - gamma_f).matrix();
    append_band(sy, &yaw_hi, &yaw_lo, RowFamily::FovYaw, parts);

    return stack(parts);
}

LinearInequalities stack(const std::vector<LinearInequalities>& parts) {
    Eigen::Index cols = -1;
    Eigen::Index rows = 0;
    for (const auto& p : parts) {
        if (p.rows() == 0) continue;
        if (cols < 0) cols = p.G.cols();
        if (p.G.cols() != cols) {
            throw DimensionMismatchError("stack parts have mismatched column counts");
        }
        rows += p.G.rows();
    }
    LinearInequalities out;
    if (cols < 0) {
        out.G.resize(0, 0);
        out.g.resize(0);
        return out;
    }
    out.G.resize(rows, cols);
    out.g.resize(rows);
    out.labels.reserve(static_cast<std::size_t>(rows));
    Eigen::Index r = 0;
    for (const auto& p : parts) {
        if (p.rows() == 0) continue;
        out.G.middleRows(r, p.G.rows()) = p.G;
        out.g.segment(r, p.g.size()) = p.g;
        out.labels.insert(out.labels.end(), p.labels.begin(), p.labels.end());
        r += p.G.rows();
    }
    return out;
}

}  // namespace dockmpc
