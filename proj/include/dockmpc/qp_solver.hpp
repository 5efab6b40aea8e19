// Dense strictly-convex QP solver: primal active set with a feasibility
// phase and a quadratic-slack relaxation path for soft rows.
#pragma once

#include <string>
#include <vector>

#include "dockmpc/errors.hpp"
#include "dockmpc/linalg.hpp"

namespace dockmpc {

// min 1/2 z'Hz + f'z  s.t.  G z <= g.  Rows flagged soft may be relaxed
// with quadratically penalized slacks when the problem is infeasible;
// rows left hard (inputs) are never relaxed.
struct QpProblem {
    MatX H;
    VecX f;
    MatX G;
    VecX g;
    std::vector<bool> soft;        // per-row; empty means all hard
    double slack_weight = 1.0e6;

    void validate() const;
};

enum class QpStatus : int {
    Optimal = 0,
    RelaxedOptimal = 1,
    Infeasible = 2,
    MaxIter = 3,
};

const char* qp_status_name(QpStatus s);

struct KktResiduals {
    double stationarity = 0.0;
    double primal = 0.0;
    double complementarity = 0.0;
};

struct QpSolution {
    VecX z;
    QpStatus status = QpStatus::Infeasible;
    KktResiduals kkt;
    int iterations = 0;
    std::vector<int> active_set;   // row indices active at the solution
    VecX slack;                    // per row, zero on hard rows; empty when no relaxation ran
    int relaxed_rows = 0;          // soft rows with slack above threshold
};

// Warm-start data carried across receding-horizon steps.
struct QpWarmStart {
    VecX z0;                       // candidate start point (e.g. shifted plan)
    std::vector<int> active_hint;  // previous active set, shifted
};

QpSolution solve_qp(const QpProblem& p, double tol = 1.0e-8, int max_iter = 200,
                    const QpWarmStart* warm = nullptr);

// Flat text serialization of (H, f, G, g) for offline debugging: one
// row-major line per matrix row, decimal, sections tagged by name.
std::string dump_problem(const QpProblem& p);

}  // namespace dockmpc
