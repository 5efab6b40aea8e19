#include "dockmpc/qp_solver.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace dockmpc {

namespace {

// Slack above this (state units) counts as a genuine relaxation event.
constexpr double kRelaxThreshold = 1.0e-4;

// Consecutive zero-length steps tolerated before the drop rule switches to
// smallest-index selection to break degenerate cycles.
constexpr int kStallLimit = 40;

using LinOp = std::function<VecX(const VecX&)>;

struct AsmOutcome {
    VecX z;
    VecX lambda;                // per row, zero off the active set
    std::vector<int> active;
    int iterations = 0;
    bool optimal = false;
};

// Primal active-set method from a feasible start for a strictly convex
// cost given through multiply/solve operators.  The working set keeps
// Y = H^-1 G_W' and the Gram matrix S = G_W Y updated incrementally.
AsmOutcome active_set_from_feasible(const LinOp& hmul, const LinOp& hsolve,
                                    const VecX& f, const MatX& G, const VecX& g,
                                    const VecX& z0, const std::vector<int>& hint,
                                    double tol, int max_iter) {
    const Eigen::Index n = f.size();
    const Eigen::Index rows = g.size();

    AsmOutcome out;
    out.z = z0;
    out.lambda = VecX::Zero(rows);

    VecX scale(rows);
    for (Eigen::Index i = 0; i < rows; ++i) scale[i] = std::max(1.0, G.row(i).norm());

    std::vector<int> W;
    MatX Y(n, 0);
    MatX S(0, 0);
    const auto add_to_working_set = [&](int row) -> bool {
        const VecX y = hsolve(G.row(row).transpose());
        const Eigen::Index k = static_cast<Eigen::Index>(W.size());
        MatX Snew(k + 1, k + 1);
        Snew.topLeftCorner(k, k) = S;
        for (Eigen::Index a = 0; a < k; ++a) {
            Snew(a, k) = G.row(W[static_cast<std::size_t>(a)]).dot(y);
            Snew(k, a) = G.row(row).dot(Y.col(a));
        }
        Snew(k, k) = G.row(row).dot(y);
        const Eigen::LLT<MatX> sfac(Snew);
        if (sfac.info() != Eigen::Success) return false;  // dependent row
        W.push_back(row);
        Y.conservativeResize(Eigen::NoChange, k + 1);
        Y.col(k) = y;
        S = std::move(Snew);
        return true;
    };
    const auto drop_from_working_set = [&](int pos) {
        W.erase(W.begin() + pos);
        const Eigen::Index k = Y.cols();
        MatX Ynew(n, k - 1);
        MatX Snew(k - 1, k - 1);
        Eigen::Index c = 0;
        for (Eigen::Index j = 0; j < k; ++j) {
            if (j == pos) continue;
            Ynew.col(c) = Y.col(j);
            Eigen::Index r = 0;
            for (Eigen::Index i = 0; i < k; ++i) {
                if (i == pos) continue;
                Snew(r, c) = S(i, j);
                ++r;
            }
            ++c;
        }
        Y = std::move(Ynew);
        S = std::move(Snew);
    };

    for (int row : hint) {
        if (row < 0 || row >= rows) continue;
        if (std::find(W.begin(), W.end(), row) != W.end()) continue;
        if (std::abs(G.row(row).dot(out.z) - g[row]) <= tol * scale[row]) {
            add_to_working_set(row);
        }
    }

    int skip_row = -1;  // row that failed to join the working set last iteration
    int stalls = 0;
    bool smallest_index_drops = false;
    for (out.iterations = 0; out.iterations < max_iter; ++out.iterations) {
        const VecX grad = hmul(out.z) + f;
        const VecX hg = hsolve(grad);

        VecX lamW;
        VecX d;
        if (W.empty()) {
            d = -hg;
        } else {
            lamW = S.llt().solve(-(Y.transpose() * grad));
            d = -(hg + Y * lamW);
        }

        if (d.cwiseAbs().maxCoeff() <= tol * (1.0 + out.z.cwiseAbs().maxCoeff())) {
            int worst = -1;
            if (smallest_index_drops) {
                int best_row = std::numeric_limits<int>::max();
                for (std::size_t a = 0; a < W.size(); ++a) {
                    if (lamW[static_cast<Eigen::Index>(a)] < -tol && W[a] < best_row) {
                        best_row = W[a];
                        worst = static_cast<int>(a);
                    }
                }
            } else {
                double most_negative = -tol;
                for (std::size_t a = 0; a < W.size(); ++a) {
                    if (lamW[static_cast<Eigen::Index>(a)] < most_negative) {
                        most_negative = lamW[static_cast<Eigen::Index>(a)];
                        worst = static_cast<int>(a);
                    }
                }
            }
            if (worst < 0) {
                out.lambda.setZero();
                for (std::size_t a = 0; a < W.size(); ++a) {
                    out.lambda[W[a]] = lamW[static_cast<Eigen::Index>(a)];
                }
                out.active = W;
                out.optimal = true;
                return out;
            }
            drop_from_working_set(worst);
            skip_row = -1;
            continue;
        }

        // Ratio test over rows outside the working set.
        double alpha = 1.0;
        int blocking = -1;
        const VecX Gd = G * d;
        for (Eigen::Index i = 0; i < rows; ++i) {
            if (i == skip_row) continue;
            if (std::find(W.begin(), W.end(), static_cast<int>(i)) != W.end()) continue;
            if (Gd[i] <= 1e-14 * scale[i]) continue;
            const double ai = std::max(0.0, (g[i] - G.row(i).dot(out.z)) / Gd[i]);
            if (ai < alpha - 1e-12) {
                alpha = ai;
                blocking = static_cast<int>(i);
            } else if (blocking >= 0 && ai <= alpha + 1e-12 && static_cast<int>(i) < blocking) {
                blocking = static_cast<int>(i);
            }
        }

        if (alpha <= 1e-14) {
            if (++stalls > kStallLimit) smallest_index_drops = true;
        } else {
            stalls = 0;
        }

        out.z += alpha * d;
        skip_row = -1;
        if (blocking >= 0) {
            if (!add_to_working_set(blocking)) skip_row = blocking;
        }
    }

    out.active = W;
    return out;  // optimal stays false: iteration budget exhausted
}

bool point_feasible(const MatX& G, const VecX& g, const VecX& z, double tol) {
    for (Eigen::Index i = 0; i < g.size(); ++i) {
        const double s = std::max(1.0, G.row(i).norm());
        if (G.row(i).dot(z) - g[i] > tol * s) return false;
    }
    return true;
}

KktResiduals kkt_residuals(const MatX& H, const VecX& f, const MatX& G, const VecX& g,
                           const VecX& z, const VecX& lambda) {
    KktResiduals r;
    VecX stat = H * z + f;
    if (g.size() > 0) stat += G.transpose() * lambda;
    r.stationarity = stat.size() > 0 ? stat.cwiseAbs().maxCoeff() : 0.0;
    for (Eigen::Index i = 0; i < g.size(); ++i) {
        const double s = std::max(1.0, G.row(i).norm());
        const double viol = G.row(i).dot(z) - g[i];
        r.primal = std::max(r.primal, viol / s);
        r.complementarity = std::max(r.complementarity, std::abs(lambda[i] * viol));
    }
    r.primal = std::max(r.primal, 0.0);
    return r;
}

// Expanded constraint set over (z, s): relaxed rows gain a subtracted
// slack, slacks are nonnegative and quadratically penalized.
struct RelaxedProblem {
    MatX G;
    VecX f, g;
    std::vector<int> relaxed_rows;   // original indices, in slack order
};

RelaxedProblem build_relaxed(const QpProblem& p, bool all_rows) {
    RelaxedProblem r;
    const Eigen::Index n = p.f.size();
    const Eigen::Index rows = p.g.size();
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (all_rows || (!p.soft.empty() && p.soft[static_cast<std::size_t>(i)])) {
            r.relaxed_rows.push_back(static_cast<int>(i));
        }
    }
    const Eigen::Index ns = static_cast<Eigen::Index>(r.relaxed_rows.size());
    r.f = VecX::Zero(n + ns);
    r.f.head(n) = p.f;
    r.G = MatX::Zero(rows + ns, n + ns);
    r.G.topLeftCorner(rows, n) = p.G;
    for (Eigen::Index j = 0; j < ns; ++j) {
        r.G(r.relaxed_rows[static_cast<std::size_t>(j)], n + j) = -1.0;
        r.G(rows + j, n + j) = -1.0;
    }
    r.g = VecX::Zero(rows + ns);
    r.g.head(rows) = p.g;
    return r;
}

}  // namespace

void QpProblem::validate() const {
    if (H.rows() != H.cols() || H.rows() != f.size()) {
        throw DimensionMismatchError("QP cost dimensions are inconsistent");
    }
    if (G.rows() != g.size() || (G.rows() > 0 && G.cols() != f.size())) {
        throw DimensionMismatchError("QP constraint dimensions are inconsistent");
    }
    if (!soft.empty() && static_cast<Eigen::Index>(soft.size()) != g.size()) {
        throw DimensionMismatchError("QP soft flags must have one entry per row");
    }
    if (!H.allFinite() || !f.allFinite() || !G.allFinite() || !g.allFinite()) {
        throw NonFiniteError("QP data contains non-finite entries");
    }
    if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
        throw ValidationError("QP cost matrix must be symmetric");
    }
    if (!(slack_weight > 0.0)) {
        throw ValidationError("QP slack weight must be positive");
    }
}

const char* qp_status_name(QpStatus s) {
    switch (s) {
        case QpStatus::Optimal: return "optimal";
        case QpStatus::RelaxedOptimal: return "relaxed_optimal";
        case QpStatus::Infeasible: return "infeasible";
        case QpStatus::MaxIter: return "max_iter";
    }
    return "unknown";
}

QpSolution solve_qp(const QpProblem& p, double tol, int max_iter, const QpWarmStart* warm) {
    p.validate();
    const Eigen::Index n = p.f.size();
    const Eigen::Index rows = p.g.size();

    const Eigen::LLT<MatX> hfac(p.H);
    if (hfac.info() != Eigen::Success) {
        throw NotPositiveDefiniteError("QP cost matrix is not positive definite");
    }
    const LinOp hmul = [&p](const VecX& v) { return VecX(p.H * v); };
    const LinOp hsolve = [&hfac](const VecX& v) { return VecX(hfac.solve(v)); };

    QpSolution sol;

    // Stage 1: the hard problem from a feasible start, when one is at hand.
    VecX z0;
    bool have_start = false;
    if (warm && warm->z0.size() == n && point_feasible(p.G, p.g, warm->z0, tol)) {
        z0 = warm->z0;
        have_start = true;
    } else if (point_feasible(p.G, p.g, VecX::Zero(n), tol)) {
        z0 = VecX::Zero(n);
        have_start = true;
    }
    if (have_start) {
        const std::vector<int> hint = warm ? warm->active_hint : std::vector<int>{};
        AsmOutcome o = active_set_from_feasible(hmul, hsolve, p.f, p.G, p.g, z0, hint,
                                                tol, max_iter);
        sol.z = o.z;
        sol.iterations = o.iterations;
        sol.active_set = o.active;
        sol.kkt = kkt_residuals(p.H, p.f, p.G, p.g, o.z, o.lambda);
        sol.status = o.optimal ? QpStatus::Optimal : QpStatus::MaxIter;
        return sol;
    }

    // Stage 2: no all-rows-feasible start exists, so relax.  Normally only
    // the soft rows gain slacks, from a start that satisfies the hard rows;
    // if no such start is at hand either (or no row is soft), every row is
    // slacked so that the relaxed problem always admits a feasible start,
    // and hard-row slack at the optimum certifies genuine infeasibility.
    const bool probe_only = p.soft.empty() ||
                            std::none_of(p.soft.begin(), p.soft.end(), [](bool b) { return b; });
    bool relax_all = probe_only;
    VecX zh = VecX::Zero(n);
    if (!relax_all) {
        const auto hard_rows_ok = [&](const VecX& z) {
            for (Eigen::Index i = 0; i < rows; ++i) {
                if (p.soft[static_cast<std::size_t>(i)]) continue;
                const double s = std::max(1.0, p.G.row(i).norm());
                if (p.G.row(i).dot(z) - p.g[i] > tol * s) return false;
            }
            return true;
        };
        if (!hard_rows_ok(zh)) {
            if (warm && warm->z0.size() == n && hard_rows_ok(warm->z0)) {
                zh = warm->z0;
            } else {
                relax_all = true;
            }
        }
    }

    const RelaxedProblem rp = build_relaxed(p, relax_all);
    const Eigen::Index ns = static_cast<Eigen::Index>(rp.relaxed_rows.size());
    const double w = p.slack_weight;

    VecX v0 = VecX::Zero(n + ns);
    v0.head(n) = zh;
    for (Eigen::Index j = 0; j < ns; ++j) {
        const int row = rp.relaxed_rows[static_cast<std::size_t>(j)];
        v0[n + j] = std::max(0.0, p.G.row(row).dot(zh) - p.g[row]);
    }

    const LinOp hmul2 = [&p, n, ns, w](const VecX& v) {
        VecX r(n + ns);
        r.head(n) = p.H * v.head(n);
        r.tail(ns) = 2.0 * w * v.tail(ns);
        return r;
    };
    const LinOp hsolve2 = [&hfac, n, ns, w](const VecX& v) {
        VecX r(n + ns);
        r.head(n) = hfac.solve(v.head(n));
        r.tail(ns) = v.tail(ns) / (2.0 * w);
        return r;
    };

    const std::vector<int> hint = warm ? warm->active_hint : std::vector<int>{};
    AsmOutcome o = active_set_from_feasible(hmul2, hsolve2, rp.f, rp.G, rp.g, v0, hint,
                                            tol, max_iter);

    sol.z = o.z.head(n);
    sol.iterations = o.iterations;
    sol.slack = VecX::Zero(rows);
    double max_soft_slack = 0.0;
    double max_hard_slack = 0.0;
    for (Eigen::Index j = 0; j < ns; ++j) {
        const int row = rp.relaxed_rows[static_cast<std::size_t>(j)];
        const double s = o.z[n + j];
        sol.slack[row] = s;
        const bool is_soft = !p.soft.empty() && p.soft[static_cast<std::size_t>(row)];
        if (is_soft) {
            max_soft_slack = std::max(max_soft_slack, s);
            if (s > kRelaxThreshold) ++sol.relaxed_rows;
        } else {
            max_hard_slack = std::max(max_hard_slack, s);
        }
    }
    for (int a : o.active) {
        if (a < rows) sol.active_set.push_back(a);
    }
    sol.kkt = kkt_residuals(p.H, p.f, p.G, p.g, sol.z, VecX::Zero(rows));

    if (!o.optimal) {
        sol.status = QpStatus::MaxIter;
    } else if (max_hard_slack > tol) {
        sol.status = QpStatus::Infeasible;
    } else if (max_soft_slack <= tol) {
        sol.status = QpStatus::Optimal;
    } else {
        sol.status = QpStatus::RelaxedOptimal;
    }
    return sol;
}

std::string dump_problem(const QpProblem& p) {
    std::ostringstream os;
    os.precision(17);
    const auto emit = [&os](const char* name, const MatX& M) {
        os << name << " " << M.rows() << " " << M.cols() << "\n";
        for (Eigen::Index i = 0; i < M.rows(); ++i) {
            for (Eigen::Index j = 0; j < M.cols(); ++j) {
                os << M(i, j) << (j + 1 < M.cols() ? " " : "");
            }
            os << "\n";
        }
    };
    emit("H", p.H);
    emit("f", p.f.transpose());
    emit("G", p.G);
    emit("g", p.g.transpose());
    os << "soft";
    for (bool b : p.soft) os << " " << (b ? 1 : 0);
    os << "\nslack_weight " << p.slack_weight << "\n";
    return os.str();
}

}  // namespace dockmpc
