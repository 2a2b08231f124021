#pragma once

#include "njgl/types.hpp"

#include <span>
#include <stdexcept>

namespace njgl {

/// Raised when an RCON decomposition does not reproduce its matrices.
class ConstraintViolation : public std::domain_error {
public:
    ConstraintViolation(const std::string& what, double residual)
        : std::domain_error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Relative tolerance on decomposition residuals accepted by the objective evaluators.
inline constexpr double kCouplingTolerance = 1e-6;

/// log det of an SPD matrix via Cholesky; throws std::domain_error naming `label`
/// when the matrix is not positive definite.
double log_det_spd(const Matrix& theta, const std::string& label = "matrix");

/// sum_k n_k (-log det Theta^k + trace(S^k Theta^k))
double neg_log_likelihood(const EmpiricalModel& model, std::span<const Matrix> thetas);

/// sum_j || [V^1; ...; V^K]_j ||_q over stacked columns.
double stacked_column_norm_sum(std::span<const Matrix> vs, NormType q);

double pnjgl_objective(const EmpiricalModel& model, const Matrix& theta1, const Matrix& theta2,
                       const Matrix& v, const PenaltyConfig& cfg);

/// `vs` are the off-diagonal decompositions V^k (Theta^k - diag Theta^k = V^k + V^k^T).
double cnjgl_objective(const EmpiricalModel& model, std::span<const Matrix> thetas,
                       std::span<const Matrix> vs, const PenaltyConfig& cfg);

/// Graphical lasso objective for one class with separate diagonal and off-diagonal weights.
double gl_objective(const Matrix& S, double n, const Matrix& theta, double lambda_diag,
                    double lambda_offdiag);

/// Fused graphical lasso in its PNJGL(q=1) form:
/// -L + lambda1 sum_k ||Theta^k||_1 + (lambda2/2) sum_{i,j} |Theta^1_ij - Theta^2_ij|.
double fgl_objective(const EmpiricalModel& model, std::span<const Matrix> thetas, double lambda1,
                     double lambda2);

/// Group graphical lasso: -L + lambda1 sum_k ||Theta^k||_1
///                         + lambda2 sum_{i != j} sqrt(sum_k (Theta^k_ij)^2).
double ggl_objective(const EmpiricalModel& model, std::span<const Matrix> thetas, double lambda1,
                     double lambda2);

}  // namespace njgl
