// Per-step discretization of the pseudo-linear model, stacked horizon
// operators, the sampling-correction blocks, and the condensed QP cost.
#pragma once

#include <cstdint>
#include <vector>

#include "dockmpc/errors.hpp"
#include "dockmpc/linalg.hpp"
#include "dockmpc/rng.hpp"

namespace dockmpc {

struct DiscreteModel {
    MatX Ad;    // n x n
    MatX Bd;    // n x m
    double Ts = 0.0;
};

// Stacked operators condensing the horizon into one QP over the input
// increments.  With n states, m inputs, horizon Np and control horizon Nc:
//   Astar  : (n*Np) x n       products of the step transition matrices
//   Bbar   : (n*Np) x (m*Np)  block-lower-triangular input convolution
//   Bstar  : (n*Np) x (m*Nc)  first m*Nc columns of Bbar (inputs beyond the
//                             control horizon are zero)
//   Lambda : (m*Nc) x m       column of identity blocks
//   Gamma  : (m*Nc) x (m*Nc)  lower-block-triangular identity blocks
//   Wstar  : (m*Nc) x (m*Nc)  block-diagonal sampling factors (zero when
//                             sampling is off)
struct PredictionOperators {
    MatX Astar, Bbar, Bstar, Lambda, Gamma, Wstar;
    int n = 0, m = 0, Np = 0, Nc = 0;

    // Bstar + Bstar * Wstar, the effective input operator.
    MatX effective_B() const { return Bstar + Bstar * Wstar; }
};

struct MpcTuning {
    int Np = 30;
    int Nc = 15;
    double Ts = 0.1;
    VecX Q;                       // state weight diagonal, length n
    VecX P;                       // input-increment weight diagonal, length m
    Vec3 ws = Vec3(0.4, 0.25, 0.25);  // sampling factors in [0,1]

    void validate(int n, int m) const;
};

struct CondensedCost {
    MatX H;      // (m*Nc) x (m*Nc), symmetric positive definite
    VecX f;      // m*Nc
    double c0 = 0.0;
};

// Matrix exponential by scaling-and-squaring with a truncated Taylor series
// (term tolerance 1e-12).
MatX expm(const MatX& A);

// Zero-order-hold discretization via the exponential of the augmented
// block matrix [[Ac, Bc], [0, 0]].
DiscreteModel discretize(const MatX& Ac, const MatX& Bc, double Ts);

// Stacked horizon operators from the Np per-step models; Wstar left zero.
PredictionOperators build_operators(const std::vector<DiscreteModel>& models, int Nc);

// One 3x3 diagonal sampling block: r * diag(ws) * diag(accel_signs) *
// diag(input_signs) with a single uniform draw r per call.
Mat3 sampling_block(const Vec3& ws, const Vec3& accel_signs, const Vec3& input_signs, Rng& rng);

// Condensed quadratic cost over the input increments.  Qt and Pt are the
// block-diagonal weight expansions over Np and Nc respectively; xd_star is
// the stacked desired-state horizon.
CondensedCost assemble_cost(const PredictionOperators& ops, const VecX& x_k,
                            const VecX& u_prev, const VecX& xd_star,
                            const MatX& Qt, const MatX& Pt);

}  // namespace dockmpc
