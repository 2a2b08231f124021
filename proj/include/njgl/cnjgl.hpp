#pragma once

#include "njgl/admm.hpp"
#include "njgl/types.hpp"

#include <optional>

namespace njgl {

/// Per-class iterates of the co-hub splitting:
///   Theta^k = Vt^k + W^k,  Vt^k = W^k^T,  Theta^k = Z^k
/// where Vt^k carries its diagonal outside the penalty (V^k = Vt^k - diag(Vt^k)).
struct CnjglState {
    std::vector<Matrix> theta, z, vt, w, f, g, q;

    static CnjglState identity(std::size_t K, Eigen::Index p);
};

struct CnjglSolution {
    PrecisionSet estimate;   ///< symmetrized Z^k, V^k = Vt^k - diag(Vt^k), certificates
    AdmmDiagnostics diagnostics;
    CnjglState state;
};

CnjglState step_cnjgl(CnjglState state, const EmpiricalModel& model, const PenaltyConfig& cfg,
                      double rho);

/// Co-hub node joint graphical lasso for any K >= 1:
///   min -L + lambda1 sum_k ||Theta^k||_1
///        + lambda2 Omega_q(Theta^1 - diag Theta^1, ..., Theta^K - diag Theta^K).
CnjglSolution solve_cnjgl(const EmpiricalModel& model, const PenaltyConfig& cfg,
                          const AdmmOptions& opts = {},
                          const std::optional<CnjglState>& init = std::nullopt);

}  // namespace njgl
