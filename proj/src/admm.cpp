#include "njgl/admm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace njgl {

void AdmmOptions::validate() const {
    if (!(rho0 > 0.0)) throw std::invalid_argument("AdmmOptions: rho0 must be positive");
    if (!(mu > 1.0)) throw std::invalid_argument("AdmmOptions: mu must exceed 1");
    if (!(eps > 0.0)) throw std::invalid_argument("AdmmOptions: eps must be positive");
    if (t_max < 1) throw std::invalid_argument("AdmmOptions: t_max must be at least 1");
    if (inner_cap < 1) throw std::invalid_argument("AdmmOptions: inner_cap must be at least 1");
    if (!(rho_max >= rho0)) throw std::invalid_argument("AdmmOptions: rho_max below rho0");
}

AdmmOptions AdmmOptions::tightened(double new_eps, int budget_factor) const {
    AdmmOptions o = *this;
    o.eps = new_eps;
    o.t_max *= budget_factor;
    o.inner_cap *= budget_factor;
    return o;
}

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged: return "converged";
        case SolveStatus::BudgetExhausted: return "budget_exhausted";
        case SolveStatus::Failed: return "failed";
    }
    return "unknown";
}

double normalized_primal_residual(const std::vector<std::pair<std::string, double>>& residuals,
                                  const std::vector<Matrix>& thetas) {
    double scale = 1.0;
    for (const auto& t : thetas) scale = std::max(scale, t.norm());
    double worst = 0.0;
    for (const auto& [name, r] : residuals) worst = std::max(worst, r);
    return worst / scale;
}

AdmmDiagnostics run_admm(AdmmProblem& problem, const AdmmOptions& opts) {
    opts.validate();
    const auto start = std::chrono::steady_clock::now();
    AdmmDiagnostics diag;
    std::vector<Matrix> prev = problem.thetas();
    double rho = opts.rho0;
    bool done = false;
    for (int t = 1; t <= opts.t_max && !done; ++t) {
        rho = std::min(rho * opts.mu, opts.rho_max);
        diag.outer_iterations = t;
        bool inner_converged = false;
        for (int k = 0; k < opts.inner_cap; ++k) {
            problem.step(rho);
            ++diag.total_iterations;
            const auto& cur = problem.thetas();
            double change = 0.0;
            for (std::size_t i = 0; i < cur.size(); ++i) {
                const double denom = prev[i].norm();
                const double d = (cur[i] - prev[i]).norm();
                change = std::max(change, denom > 0.0 ? d / denom : d);
                prev[i] = cur[i];
            }
            diag.last_relative_change = change;
            if (!std::isfinite(change))
                throw std::runtime_error("ADMM iterate became non-finite");
            if (change <= opts.eps) {
                inner_converged = true;
                break;
            }
        }
        diag.residuals = problem.residuals();
        diag.primal_residual = normalized_primal_residual(diag.residuals, problem.thetas());
        done = inner_converged && diag.primal_residual <= opts.eps;
    }
    diag.final_rho = rho;
    if (done)
        diag.status = SolveStatus::Converged;
    else
        diag.status = diag.primal_residual <= 1e2 * opts.eps ? SolveStatus::BudgetExhausted
                                                              : SolveStatus::Failed;
    diag.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return diag;
}

}  // namespace njgl
