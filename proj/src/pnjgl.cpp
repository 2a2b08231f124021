#include "njgl/pnjgl.hpp"

#include "njgl/likelihood.hpp"
#include "njgl/prox.hpp"

#include <limits>
#include <stdexcept>

namespace njgl {

namespace {

void sweep(PnjglState& s, const EmpiricalModel& model, const PenaltyConfig& cfg, double rho) {
    const double n1 = model.n(0);
    const double n2 = model.n(1);
    const double inv2rho = 1.0 / (2.0 * rho);

    s.theta1 = expand(symmetrize(0.5 * (s.theta2 + s.v + s.w + s.z1) -
                                 inv2rho * (s.q1 + n1 * model.S(0) + s.f)),
                      rho, n1);
    s.theta2 = expand(symmetrize(0.5 * (s.theta1 - (s.v + s.w) + s.z2) -
                                 inv2rho * (s.q2 + n2 * model.S(1) - s.f)),
                      rho, n2);
    s.z1 = prox_l1(s.theta1 + s.q1 / rho, cfg.lambda1 / rho);
    s.z2 = prox_l1(s.theta2 + s.q2 / rho, cfg.lambda1 / rho);

    const Matrix diff = s.theta1 - s.theta2;
    s.v = prox_columns(0.5 * (s.w.transpose() - s.w + diff) + inv2rho * (s.f - s.g),
                       cfg.lambda2 * inv2rho, cfg.q);
    s.w = 0.5 * (s.v.transpose() - s.v + diff) + inv2rho * (s.f + s.g.transpose());

    s.f += rho * (diff - (s.v + s.w));
    s.g += rho * (s.v - s.w.transpose());
    s.q1 += rho * (s.theta1 - s.z1);
    s.q2 += rho * (s.theta2 - s.z2);
}

void check_inputs(const EmpiricalModel& model, const PenaltyConfig& cfg) {
    if (model.K() != 2)
        throw std::invalid_argument("PNJGL is implemented for exactly two classes (got K = " +
                                    std::to_string(model.K()) + ")");
    cfg.validate();
}

class PnjglProblem final : public AdmmProblem {
public:
    PnjglProblem(const EmpiricalModel& model, const PenaltyConfig& cfg, PnjglState init)
        : model_(model), cfg_(cfg), state_(std::move(init)) {
        thetas_ = {state_.theta1, state_.theta2};
    }

    void step(double rho) override {
        sweep(state_, model_, cfg_, rho);
        thetas_[0] = state_.theta1;
        thetas_[1] = state_.theta2;
    }
    const std::vector<Matrix>& thetas() const override { return thetas_; }
    std::vector<std::pair<std::string, double>> residuals() const override {
        const auto& s = state_;
        return {{"theta1-theta2-(v+w)", (s.theta1 - s.theta2 - s.v - s.w).norm()},
                {"v-w^T", (s.v - s.w.transpose()).norm()},
                {"theta1-z1", (s.theta1 - s.z1).norm()},
                {"theta2-z2", (s.theta2 - s.z2).norm()}};
    }
    PnjglState take_state() { return std::move(state_); }

private:
    const EmpiricalModel& model_;
    const PenaltyConfig& cfg_;
    PnjglState state_;
    std::vector<Matrix> thetas_;
};

}  // namespace

PnjglState PnjglState::identity(Eigen::Index p) {
    const Matrix I = Matrix::Identity(p, p);
    const Matrix O = Matrix::Zero(p, p);
    return {I, I, I, I, I, I, O, O, O, O};
}

PnjglState step_pnjgl(PnjglState state, const EmpiricalModel& model, const PenaltyConfig& cfg,
                      double rho) {
    check_inputs(model, cfg);
    if (!(rho > 0.0)) throw std::invalid_argument("step_pnjgl: rho must be positive");
    sweep(state, model, cfg, rho);
    return state;
}

Matrix feasible_decomposition(const Matrix& diff, const Matrix& v, NormType q) {
    if (q == NormType::L1) return 0.5 * diff;
    return 0.5 * diff + 0.5 * (v - v.transpose());
}

PnjglSolution solve_pnjgl(const EmpiricalModel& model, const PenaltyConfig& cfg,
                          const AdmmOptions& opts, const std::optional<PnjglState>& init) {
    check_inputs(model, cfg);
    const auto p = static_cast<Eigen::Index>(model.p());
    PnjglState start = init ? *init : PnjglState::identity(p);
    if (start.theta1.rows() != p)
        throw std::invalid_argument("solve_pnjgl: warm start has the wrong dimension");

    PnjglProblem problem(model, cfg, std::move(start));
    PnjglSolution out;
    out.diagnostics = run_admm(problem, opts);
    out.state = problem.take_state();

    const auto& s = out.state;
    out.estimate.thetas = {symmetrize(s.z1), symmetrize(s.z2)};
    out.estimate.v = {s.v};
    if (cfg.lambda2 > 0.0) out.estimate.duals = {s.f / cfg.lambda2};

    const Matrix& t1 = out.estimate.thetas[0];
    const Matrix& t2 = out.estimate.thetas[1];
    const Matrix vfeas = feasible_decomposition(t1 - t2, s.v, cfg.q);
    try {
        out.diagnostics.objective = pnjgl_objective(model, t1, t2, vfeas, cfg);
    } catch (const std::domain_error&) {
        // symmetrized Z not positive definite (run stopped far from a solution)
        out.diagnostics.objective = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

}  // namespace njgl
