#pragma once

#include "njgl/types.hpp"

#include <string>
#include <vector>

namespace njgl {

/// Penalty schedule and stopping rule shared by every ADMM solver in the library.
struct AdmmOptions {
    double rho0 = 0.5;        ///< initial penalty; the first sweep runs at rho0 * mu
    double mu = 5.0;          ///< growth factor applied once per outer iteration
    int t_max = 1000;         ///< outer iterations
    double eps = 1e-4;        ///< relative-change tolerance of the inner loop
    int inner_cap = 10'000;   ///< inner iterations per outer step
    double rho_max = 1e8;

    void validate() const;
    /// Same settings with eps replaced and both iteration budgets multiplied by `budget_factor`.
    AdmmOptions tightened(double new_eps, int budget_factor) const;
};

enum class SolveStatus {
    Converged,        ///< stopping rule met
    BudgetExhausted,  ///< budget spent, residuals within 1e2 * eps
    Failed,           ///< budget spent with residuals above 1e2 * eps
};

std::string to_string(SolveStatus s);

struct AdmmDiagnostics {
    SolveStatus status = SolveStatus::Failed;
    int outer_iterations = 0;
    int total_iterations = 0;
    double final_rho = 0.0;
    double last_relative_change = 0.0;
    /// max over coupling constraints of ||residual||_F / max(1, ||Theta||_F)
    double primal_residual = 0.0;
    /// named coupling residuals (absolute Frobenius norms) at termination
    std::vector<std::pair<std::string, double>> residuals;
    double objective = 0.0;
    double wall_seconds = 0.0;

    bool converged() const { return status == SolveStatus::Converged; }
    bool failed() const { return status == SolveStatus::Failed; }
};

/// One splitting scheme: the driver owns the rho schedule and the stopping rule.
class AdmmProblem {
public:
    virtual ~AdmmProblem() = default;
    /// One full sweep: primal block updates followed by dual ascent.
    virtual void step(double rho) = 0;
    virtual const std::vector<Matrix>& thetas() const = 0;
    /// Named absolute residual norms of every coupling constraint.
    virtual std::vector<std::pair<std::string, double>> residuals() const = 0;
};

/// Runs the outer/inner loop:
///   for t = 1..t_max: rho <- min(mu rho, rho_max); sweep until
///     max_k ||Theta^k_new - Theta^k_old||_F / ||Theta^k_old||_F <= eps.
/// The outer loop ends once an inner loop meets the tolerance and the normalized
/// primal residual is at most eps.
AdmmDiagnostics run_admm(AdmmProblem& problem, const AdmmOptions& opts);

/// max_k max over named residuals, normalized by max(1, ||Theta^k||_F)
double normalized_primal_residual(const std::vector<std::pair<std::string, double>>& residuals,
                                  const std::vector<Matrix>& thetas);

}  // namespace njgl
