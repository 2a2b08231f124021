#include "njgl/likelihood.hpp"

#include <algorithm>
#include <cmath>

namespace njgl {

namespace {

void check_shapes(const EmpiricalModel& model, std::span<const Matrix> thetas) {
    if (thetas.size() != model.K())
        throw std::invalid_argument("expected " + std::to_string(model.K()) +
                                    " precision matrices, got " + std::to_string(thetas.size()));
    for (const auto& t : thetas)
        if (static_cast<std::size_t>(t.rows()) != model.p() || t.rows() != t.cols())
            throw std::invalid_argument("precision matrix has wrong shape");
}

}  // namespace

double log_det_spd(const Matrix& theta, const std::string& label) {
    Eigen::LLT<Matrix> llt(symmetrize(theta));
    if (llt.info() != Eigen::Success)
        throw std::domain_error(label + " is not positive definite");
    const auto d = llt.matrixLLT().diagonal();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        if (!(d(i) > 0.0)) throw std::domain_error(label + " is not positive definite");
        acc += std::log(d(i));
    }
    return 2.0 * acc;
}

double neg_log_likelihood(const EmpiricalModel& model, std::span<const Matrix> thetas) {
    check_shapes(model, thetas);
    double total = 0.0;
    for (std::size_t k = 0; k < thetas.size(); ++k) {
        const double ld = log_det_spd(thetas[k], "precision matrix of class " + std::to_string(k));
        const double tr = (model.S(k).cwiseProduct(thetas[k])).sum();
        total += model.n(k) * (-ld + tr);
    }
    return total;
}

double stacked_column_norm_sum(std::span<const Matrix> vs, NormType q) {
    if (vs.empty()) return 0.0;
    const auto p = vs.front().cols();
    const auto rows = vs.front().rows();
    Vector col(static_cast<Eigen::Index>(vs.size()) * rows);
    double total = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
        for (std::size_t k = 0; k < vs.size(); ++k)
            col.segment(static_cast<Eigen::Index>(k) * rows, rows) = vs[k].col(j);
        total += column_norm(col, q);
    }
    return total;
}

double pnjgl_objective(const EmpiricalModel& model, const Matrix& theta1, const Matrix& theta2,
                       const Matrix& v, const PenaltyConfig& cfg) {
    if (model.K() != 2) throw std::invalid_argument("pnjgl_objective requires K = 2");
    cfg.validate();
    const Matrix diff = theta1 - theta2;
    const double res = (diff - (v + v.transpose())).norm() / std::max(1.0, diff.norm());
    if (res > kCouplingTolerance)
        throw ConstraintViolation("V does not decompose Theta1 - Theta2 (relative residual " +
                                      std::to_string(res) + ")",
                                  res);
    const Matrix both[2] = {theta1, theta2};
    const Matrix vv[1] = {v};
    return neg_log_likelihood(model, both) + cfg.lambda1 * (l1_norm(theta1) + l1_norm(theta2)) +
           cfg.lambda2 * stacked_column_norm_sum(vv, cfg.q);
}

double cnjgl_objective(const EmpiricalModel& model, std::span<const Matrix> thetas,
                       std::span<const Matrix> vs, const PenaltyConfig& cfg) {
    cfg.validate();
    check_shapes(model, thetas);
    if (vs.size() != thetas.size())
        throw std::invalid_argument("cnjgl_objective: need one V per class");
    double pen1 = 0.0;
    for (std::size_t k = 0; k < thetas.size(); ++k) {
        const Matrix off = offdiag(thetas[k]);
        const double res = (off - (vs[k] + vs[k].transpose())).norm() / std::max(1.0, off.norm());
        if (res > kCouplingTolerance)
            throw ConstraintViolation("V^" + std::to_string(k) +
                                          " does not decompose the off-diagonal part (relative "
                                          "residual " +
                                          std::to_string(res) + ")",
                                      res);
        pen1 += l1_norm(thetas[k]);
    }
    return neg_log_likelihood(model, thetas) + cfg.lambda1 * pen1 +
           cfg.lambda2 * stacked_column_norm_sum(vs, cfg.q);
}

double gl_objective(const Matrix& S, double n, const Matrix& theta, double lambda_diag,
                    double lambda_offdiag) {
    const double ld = log_det_spd(theta, "precision matrix");
    const double tr = S.cwiseProduct(theta).sum();
    const double diag = theta.diagonal().cwiseAbs().sum();
    const double off = l1_norm(theta) - diag;
    return n * (-ld + tr) + lambda_diag * diag + lambda_offdiag * off;
}

double fgl_objective(const EmpiricalModel& model, std::span<const Matrix> thetas, double lambda1,
                     double lambda2) {
    if (model.K() != 2) throw std::invalid_argument("fgl_objective requires K = 2");
    double pen = 0.0;
    for (const auto& t : thetas) pen += l1_norm(t);
    return neg_log_likelihood(model, thetas) + lambda1 * pen +
           0.5 * lambda2 * l1_norm(thetas[0] - thetas[1]);
}

double ggl_objective(const EmpiricalModel& model, std::span<const Matrix> thetas, double lambda1,
                     double lambda2) {
    check_shapes(model, thetas);
    double pen1 = 0.0;
    Matrix sq = Matrix::Zero(thetas[0].rows(), thetas[0].cols());
    for (const auto& t : thetas) {
        pen1 += l1_norm(t);
        sq += t.cwiseAbs2();
    }
    sq.diagonal().setZero();
    return neg_log_likelihood(model, thetas) + lambda1 * pen1 + lambda2 * sq.cwiseSqrt().sum();
}

}  // namespace njgl
