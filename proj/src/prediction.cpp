#include "dockmpc/prediction.hpp"

#include <cmath>

namespace dockmpc {

void MpcTuning::validate(int n, int m) const {
    if (!(Nc >= 1 && Nc <= Np)) {
        throw ValidationError("mpc horizons must satisfy 1 <= Nc <= Np");
    }
    if (!(Ts > 0.0)) throw ValidationError("mpc Ts must be positive");
    if (Q.size() != n) throw ValidationError("mpc Q diagonal must have one entry per state");
    if (P.size() != m) throw ValidationError("mpc P diagonal must have one entry per input");
    if ((Q.array() < 0.0).any()) throw ValidationError("mpc Q entries must be nonnegative");
    if ((P.array() <= 0.0).any()) throw ValidationError("mpc P entries must be positive");
    for (int i = 0; i < 3; ++i) {
        if (!(ws[i] >= 0.0 && ws[i] <= 1.0)) {
            throw ValidationError("sampling factors ws must lie in [0, 1]");
        }
    }
}

MatX expm(const MatX& A) {
    if (A.rows() != A.cols()) throw DimensionMismatchError("expm needs a square matrix");
    if (!A.allFinite()) throw NonFiniteError("expm input contains non-finite entries");
    const double norm = A.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    if (norm > 0.5) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    }
    const MatX As = A / std::pow(2.0, squarings);

    const Eigen::Index n = A.rows();
    MatX result = MatX::Identity(n, n);
    MatX term = MatX::Identity(n, n);
    for (int k = 1; k <= 64; ++k) {
        term = (As * term) / static_cast<double>(k);
        result += term;
        if (term.cwiseAbs().maxCoeff() < 1e-12) break;
    }
    for (int i = 0; i < squarings; ++i) result = result * result;
    return result;
}

DiscreteModel discretize(const MatX& Ac, const MatX& Bc, double Ts) {
    if (!(Ts > 0.0)) throw ValidationError("discretize needs Ts > 0");
    if (Ac.rows() != Ac.cols() || Bc.rows() != Ac.rows()) {
        throw DimensionMismatchError("discretize needs Ac n x n and Bc n x m");
    }
    if (!Ac.allFinite() || !Bc.allFinite()) {
        throw NonFiniteError("discretize inputs contain non-finite entries");
    }
    const Eigen::Index n = Ac.rows(), m = Bc.cols();
    MatX aug = MatX::Zero(n + m, n + m);
    aug.topLeftCorner(n, n) = Ac;
    aug.topRightCorner(n, m) = Bc;
    const MatX E = expm(aug * Ts);
    DiscreteModel d;
    d.Ad = E.topLeftCorner(n, n);
    d.Bd = E.topRightCorner(n, m);
    d.Ts = Ts;
    return d;
}

PredictionOperators build_operators(const std::vector<DiscreteModel>& models, int Nc) {
    if (models.empty()) throw DimensionMismatchError("build_operators needs Np >= 1 models");
    const int Np = static_cast<int>(models.size());
    if (!(Nc >= 1 && Nc <= Np)) {
        throw DimensionMismatchError("build_operators needs 1 <= Nc <= Np");
    }
    const Eigen::Index n = models[0].Ad.rows();
    const Eigen::Index m = models[0].Bd.cols();
    for (const auto& md : models) {
        if (md.Ad.rows() != n || md.Ad.cols() != n || md.Bd.rows() != n || md.Bd.cols() != m) {
            throw DimensionMismatchError("build_operators models have inconsistent shapes");
        }
    }

    PredictionOperators ops;
    ops.n = static_cast<int>(n);
    ops.m = static_cast<int>(m);
    ops.Np = Np;
    ops.Nc = Nc;
    ops.Astar = MatX::Zero(n * Np, n);
    ops.Bbar = MatX::Zero(n * Np, m * Np);

    MatX Arow = MatX::Identity(n, n);
    MatX Brow = MatX::Zero(n, m * Np);
    for (int i = 0; i < Np; ++i) {
        Arow = models[i].Ad * Arow;
        Brow = models[i].Ad * Brow;
        Brow.block(0, m * i, n, m) = models[i].Bd;
        ops.Astar.block(n * i, 0, n, n) = Arow;
        ops.Bbar.block(n * i, 0, n, m * Np) = Brow;
    }
    ops.Bstar = ops.Bbar.leftCols(m * Nc);

    ops.Lambda = MatX::Zero(m * Nc, m);
    ops.Gamma = MatX::Zero(m * Nc, m * Nc);
    for (int i = 0; i < Nc; ++i) {
        ops.Lambda.block(m * i, 0, m, m).setIdentity();
        for (int j = 0; j <= i; ++j) {
            ops.Gamma.block(m * i, m * j, m, m).setIdentity();
        }
    }
    ops.Wstar = MatX::Zero(m * Nc, m * Nc);
    return ops;
}

Mat3 sampling_block(const Vec3& ws, const Vec3& accel_signs, const Vec3& input_signs,
                    Rng& rng) {
    const double r = rng.uniform();
    Mat3 W = Mat3::Zero();
    for (int i = 0; i < 3; ++i) {
        W(i, i) = r * ws[i] * accel_signs[i] * input_signs[i];
    }
    return W;
}

CondensedCost assemble_cost(const PredictionOperators& ops, const VecX& x_k,
                            const VecX& u_prev, const VecX& xd_star,
                            const MatX& Qt, const MatX& Pt) {
    const Eigen::Index nNp = static_cast<Eigen::Index>(ops.n) * ops.Np;
    const Eigen::Index mNc = static_cast<Eigen::Index>(ops.m) * ops.Nc;
    if (x_k.size() != ops.n || u_prev.size() != ops.m || xd_star.size() != nNp ||
        Qt.rows() != nNp || Qt.cols() != nNp || Pt.rows() != mNc || Pt.cols() != mNc) {
        throw DimensionMismatchError("assemble_cost arguments have inconsistent shapes");
    }
    const MatX BW = ops.effective_B();
    const MatX M = BW * ops.Gamma;
    const VecX E = xd_star - ops.Astar * x_k - BW * (ops.Lambda * u_prev);
    MatX H = 2.0 * (M.transpose() * Qt * M + Pt);
    H = 0.5 * (H + H.transpose().eval());
    CondensedCost c;
    c.H = H;
    c.f = -2.0 * (M.transpose() * (Qt * E));
    c.c0 = E.dot(Qt * E);
    return c;
}

}  // namespace dockmpc
