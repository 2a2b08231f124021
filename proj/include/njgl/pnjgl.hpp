#pragma once

#include "njgl/admm.hpp"
#include "njgl/types.hpp"

#include <optional>

namespace njgl {

/// Iterates of the perturbed-node splitting:
///   Theta1 - Theta2 = V + W,  V = W^T,  Theta^i = Z^i
/// with duals F, G, Q1, Q2 for the four constraints.
struct PnjglState {
    Matrix theta1, theta2, z1, z2, v, w, f, g, q1, q2;

    /// Primal variables at the identity, duals at zero.
    static PnjglState identity(Eigen::Index p);
};

struct PnjglSolution {
    PrecisionSet estimate;   ///< symmetrized Z^i, the V iterate, certificate F / lambda2
    AdmmDiagnostics diagnostics;
    PnjglState state;
};

/// One sweep of the six primal updates and four dual updates at penalty rho.
PnjglState step_pnjgl(PnjglState state, const EmpiricalModel& model, const PenaltyConfig& cfg,
                      double rho);

/// Perturbed-node joint graphical lasso for K = 2:
///   min -L + lambda1 (||Theta1||_1 + ||Theta2||_1) + lambda2 Omega_q(Theta1 - Theta2).
PnjglSolution solve_pnjgl(const EmpiricalModel& model, const PenaltyConfig& cfg,
                          const AdmmOptions& opts = {},
                          const std::optional<PnjglState>& init = std::nullopt);

/// Feasible decomposition V with V + V^T = diff: diff/2 for q = 1 (optimal), otherwise
/// diff/2 plus the skew part of `v`.
Matrix feasible_decomposition(const Matrix& diff, const Matrix& v, NormType q);

}  // namespace njgl
