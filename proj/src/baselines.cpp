#include "njgl/baselines.hpp"

#include "njgl/likelihood.hpp"
#include "njgl/prox.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace njgl {

namespace {

void require_lambda(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v))
        throw std::invalid_argument(std::string(name) + " must be finite and non-negative");
}

// Theta^k = Z^k splitting with one proximal Z-update acting on all classes.
class ConsensusProblem final : public AdmmProblem {
public:
    using ZUpdate = std::function<std::vector<Matrix>(std::vector<Matrix>, double rho)>;

    ConsensusProblem(std::vector<const Matrix*> S, std::vector<double> n, ZUpdate zupdate)
        : S_(std::move(S)), n_(std::move(n)), zupdate_(std::move(zupdate)) {
        const auto p = S_.front()->rows();
        const Matrix I = Matrix::Identity(p, p);
        theta_.assign(S_.size(), I);
        z_.assign(S_.size(), I);
        q_.assign(S_.size(), Matrix::Zero(p, p));
    }

    void step(double rho) override {
        const std::size_t K = theta_.size();
        for (std::size_t k = 0; k < K; ++k)
            theta_[k] = expand(symmetrize(z_[k] - (q_[k] + n_[k] * *S_[k]) / rho), 0.5 * rho, n_[k]);
        std::vector<Matrix> arg(K);
        for (std::size_t k = 0; k < K; ++k) arg[k] = theta_[k] + q_[k] / rho;
        z_ = zupdate_(std::move(arg), rho);
        for (std::size_t k = 0; k < K; ++k) q_[k] += rho * (theta_[k] - z_[k]);
    }
    const std::vector<Matrix>& thetas() const override { return theta_; }
    std::vector<std::pair<std::string, double>> residuals() const override {
        std::vector<std::pair<std::string, double>> out;
        for (std::size_t k = 0; k < theta_.size(); ++k)
            out.emplace_back("theta" + std::to_string(k + 1) + "-z" + std::to_string(k + 1),
                             (theta_[k] - z_[k]).norm());
        return out;
    }
    std::vector<Matrix> estimates() const {
        std::vector<Matrix> out;
        for (const auto& z : z_) out.push_back(symmetrize(z));
        return out;
    }

private:
    std::vector<const Matrix*> S_;
    std::vector<double> n_;
    ZUpdate zupdate_;
    std::vector<Matrix> theta_, z_, q_;
};

Matrix weighted_soft_threshold(const Matrix& A, double lam_diag, double lam_off) {
    Matrix out = prox_l1(A, lam_off);
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        const double a = A(i, i);
        out(i, i) = std::copysign(std::max(std::abs(a) - lam_diag, 0.0), a);
    }
    return out;
}

}  // namespace

GlSolution solve_gl(const Matrix& S, double n, double lambda1, const AdmmOptions& opts) {
    return solve_gl(S, n, lambda1, lambda1, opts);
}

GlSolution solve_gl(const Matrix& S, double n, double lambda_diag, double lambda_offdiag,
                    const AdmmOptions& opts) {
    require_lambda(lambda_diag, "lambda (diagonal)");
    require_lambda(lambda_offdiag, "lambda (off-diagonal)");
    // shape and finiteness checks
    const EmpiricalModel model({{S, n}});
    ConsensusProblem problem({&model.S(0)}, {n}, [&](std::vector<Matrix> a, double rho) {
        a[0] = weighted_soft_threshold(a[0], lambda_diag / rho, lambda_offdiag / rho);
        return a;
    });
    GlSolution out;
    out.diagnostics = run_admm(problem, opts);
    out.theta = problem.estimates()[0];
    try {
        out.diagnostics.objective =
            gl_objective(model.S(0), n, out.theta, lambda_diag, lambda_offdiag);
    } catch (const std::domain_error&) {
        out.diagnostics.objective = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

BaselineSolution solve_gl_classes(const EmpiricalModel& model, double lambda1,
                                  const AdmmOptions& opts) {
    BaselineSolution out;
    auto& d = out.diagnostics;
    d.status = SolveStatus::Converged;
    for (std::size_t k = 0; k < model.K(); ++k) {
        GlSolution s = solve_gl(model.S(k), model.n(k), lambda1, opts);
        out.estimate.thetas.push_back(std::move(s.theta));
        const auto& sd = s.diagnostics;
        if (static_cast<int>(sd.status) > static_cast<int>(d.status)) d.status = sd.status;
        d.outer_iterations = std::max(d.outer_iterations, sd.outer_iterations);
        d.total_iterations += sd.total_iterations;
        d.final_rho = std::max(d.final_rho, sd.final_rho);
        d.last_relative_change = std::max(d.last_relative_change, sd.last_relative_change);
        d.primal_residual = std::max(d.primal_residual, sd.primal_residual);
        for (auto [name, r] : sd.residuals) {
            d.residuals.emplace_back("class" + std::to_string(k + 1) + ":" + name, r);
        }
        d.objective += sd.objective;
        d.wall_seconds += sd.wall_seconds;
    }
    return out;
}

PnjglSolution solve_fgl(const EmpiricalModel& model, double lambda1, double lambda2,
                        const AdmmOptions& opts) {
    return solve_pnjgl(model, PenaltyConfig{lambda1, lambda2, NormType::L1}, opts);
}

BaselineSolution solve_ggl(const EmpiricalModel& model, double lambda1, double lambda2,
                           const AdmmOptions& opts) {
    if (model.K() < 2) throw std::invalid_argument("GGL needs at least two classes");
    require_lambda(lambda1, "lambda1");
    require_lambda(lambda2, "lambda2");
    std::vector<const Matrix*> S;
    std::vector<double> n;
    for (std::size_t k = 0; k < model.K(); ++k) {
        S.push_back(&model.S(k));
        n.push_back(model.n(k));
    }
    ConsensusProblem problem(S, n, [&](std::vector<Matrix> a, double rho) {
        return prox_sparse_group(a, lambda1 / rho, lambda2 / rho);
    });
    BaselineSolution out;
    out.diagnostics = run_admm(problem, opts);
    out.estimate.thetas = problem.estimates();
    try {
        out.diagnostics.objective = ggl_objective(model, out.estimate.thetas, lambda1, lambda2);
    } catch (const std::domain_error&) {
        out.diagnostics.objective = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

}  // namespace njgl
