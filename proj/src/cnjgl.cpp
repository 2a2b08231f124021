#include "njgl/cnjgl.hpp"

#include "njgl/likelihood.hpp"
#include "njgl/prox.hpp"

#include <limits>
#include <stdexcept>

namespace njgl {

namespace {

void sweep(CnjglState& s, const EmpiricalModel& model, const PenaltyConfig& cfg, double rho) {
    const std::size_t K = model.K();
    const auto p = static_cast<Eigen::Index>(model.p());
    const double inv2rho = 1.0 / (2.0 * rho);

    for (std::size_t i = 0; i < K; ++i) {
        s.theta[i] = expand(symmetrize(0.5 * (s.vt[i] + s.w[i] + s.z[i]) -
                                       inv2rho * (s.q[i] + model.n(i) * model.S(i) + s.f[i])),
                            rho, model.n(i));
        s.z[i] = prox_l1(s.theta[i] + s.q[i] / rho, cfg.lambda1 / rho);
    }

    // Joint update of Vt^1..Vt^K: the prox acts on stacked off-diagonal columns,
    // the diagonals of C^i pass through unchanged.
    Matrix stacked(p * static_cast<Eigen::Index>(K), p);
    std::vector<Vector> diags(K);
    for (std::size_t i = 0; i < K; ++i) {
        Matrix c = 0.5 * (s.w[i].transpose() - s.w[i] + s.theta[i]) + inv2rho * (s.f[i] - s.g[i]);
        diags[i] = c.diagonal();
        c.diagonal().setZero();
        stacked.middleRows(static_cast<Eigen::Index>(i) * p, p) = c;
    }
    const Matrix shrunk = prox_columns(stacked, cfg.lambda2 * inv2rho, cfg.q);
    for (std::size_t i = 0; i < K; ++i) {
        s.vt[i] = shrunk.middleRows(static_cast<Eigen::Index>(i) * p, p);
        s.vt[i].diagonal() = diags[i];
    }

    for (std::size_t i = 0; i < K; ++i) {
        s.w[i] = 0.5 * (s.vt[i].transpose() - s.vt[i] + s.theta[i]) +
                 inv2rho * (s.f[i] + s.g[i].transpose());
        s.f[i] += rho * (s.theta[i] - (s.vt[i] + s.w[i]));
        s.g[i] += rho * (s.vt[i] - s.w[i].transpose());
        s.q[i] += rho * (s.theta[i] - s.z[i]);
    }
}

void check_inputs(const EmpiricalModel& model, const PenaltyConfig& cfg) {
    if (model.K() < 1) throw std::invalid_argument("CNJGL needs at least one class");
    cfg.validate();
}

class CnjglProblem final : public AdmmProblem {
public:
    CnjglProblem(const EmpiricalModel& model, const PenaltyConfig& cfg, CnjglState init)
        : model_(model), cfg_(cfg), state_(std::move(init)) {}

    void step(double rho) override { sweep(state_, model_, cfg_, rho); }
    const std::vector<Matrix>& thetas() const override { return state_.theta; }
    std::vector<std::pair<std::string, double>> residuals() const override {
        std::vector<std::pair<std::string, double>> out;
        const auto& s = state_;
        for (std::size_t i = 0; i < s.theta.size(); ++i) {
            const auto k = std::to_string(i + 1);
            out.emplace_back("theta" + k + "-(vt" + k + "+w" + k + ")",
                             (s.theta[i] - s.vt[i] - s.w[i]).norm());
            out.emplace_back("vt" + k + "-w" + k + "^T", (s.vt[i] - s.w[i].transpose()).norm());
            out.emplace_back("theta" + k + "-z" + k, (s.theta[i] - s.z[i]).norm());
        }
        return out;
    }
    CnjglState take_state() { return std::move(state_); }

private:
    const EmpiricalModel& model_;
    const PenaltyConfig& cfg_;
    CnjglState state_;
};

}  // namespace

CnjglState CnjglState::identity(std::size_t K, Eigen::Index p) {
    const Matrix I = Matrix::Identity(p, p);
    const Matrix O = Matrix::Zero(p, p);
    CnjglState s;
    s.theta.assign(K, I);
    s.z.assign(K, I);
    s.vt.assign(K, I);
    s.w.assign(K, I);
    s.f.assign(K, O);
    s.g.assign(K, O);
    s.q.assign(K, O);
    return s;
}

CnjglState step_cnjgl(CnjglState state, const EmpiricalModel& model, const PenaltyConfig& cfg,
                      double rho) {
    check_inputs(model, cfg);
    if (!(rho > 0.0)) throw std::invalid_argument("step_cnjgl: rho must be positive");
    sweep(state, model, cfg, rho);
    return state;
}

CnjglSolution solve_cnjgl(const EmpiricalModel& model, const PenaltyConfig& cfg,
                          const AdmmOptions& opts, const std::optional<CnjglState>& init) {
    check_inputs(model, cfg);
    const auto p = static_cast<Eigen::Index>(model.p());
    const std::size_t K = model.K();
    CnjglState start = init ? *init : CnjglState::identity(K, p);
    if (start.theta.size() != K || start.theta.front().rows() != p)
        throw std::invalid_argument("solve_cnjgl: warm start has the wrong shape");

    CnjglProblem problem(model, cfg, std::move(start));
    CnjglSolution out;
    out.diagnostics = run_admm(problem, opts);
    out.state = problem.take_state();

    const auto& s = out.state;
    std::vector<Matrix> vfeas(K);
    for (std::size_t i = 0; i < K; ++i) {
        out.estimate.thetas.push_back(symmetrize(s.z[i]));
        out.estimate.v.push_back(offdiag(s.vt[i]));
        if (cfg.lambda2 > 0.0) out.estimate.duals.push_back(offdiag(s.f[i]) / cfg.lambda2);
        const Matrix off = offdiag(out.estimate.thetas[i]);
        const Matrix& v = out.estimate.v[i];
        vfeas[i] = cfg.q == NormType::L1 ? Matrix(0.5 * off)
                                         : Matrix(0.5 * off + 0.5 * (v - v.transpose()));
    }
    try {
        out.diagnostics.objective = cnjgl_objective(model, out.estimate.thetas, vfeas, cfg);
    } catch (const std::domain_error&) {
        out.diagnostics.objective = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

}  // namespace njgl
