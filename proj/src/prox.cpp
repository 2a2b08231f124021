#include "njgl/prox.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace njgl {

namespace {

void require_threshold(double lam, const char* who) {
    if (!(lam >= 0.0) || !std::isfinite(lam))
        throw std::domain_error(std::string(who) + ": threshold must be finite and nonnegative");
}

double soft(double a, double lam) {
    const double m = std::abs(a) - lam;
    return m > 0.0 ? std::copysign(m, a) : 0.0;
}

}  // namespace

EigenDecomposition symmetric_eigen(const Matrix& A) {
    if (A.rows() != A.cols()) throw std::domain_error("symmetric_eigen: matrix is not square");
    const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
    if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw std::domain_error("symmetric_eigen: matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> es(A);
    if (es.info() != Eigen::Success) throw std::domain_error("symmetric_eigen: solver failed");
    return {es.eigenvectors(), es.eigenvalues()};
}

Matrix expand(const Matrix& A, double rho, double n) {
    if (!(rho > 0.0)) throw std::domain_error("expand: rho must be positive");
    if (!(n > 0.0)) throw std::domain_error("expand: n must be positive");
    const auto [U, d] = symmetric_eigen(A);
    const double c = 2.0 * n / rho;
    Vector t(d.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        // 1/2 (d + sqrt(d^2 + c)), rearranged for d << 0 to avoid cancellation
        const double r = std::sqrt(d(i) * d(i) + c);
        t(i) = d(i) >= 0.0 ? 0.5 * (d(i) + r) : 0.5 * c / (r - d(i));
    }
    Matrix out = U * t.asDiagonal() * U.transpose();
    return symmetrize(out);
}

Matrix prox_l1(const Matrix& A, double lam) {
    require_threshold(lam, "prox_l1");
    return A.unaryExpr([lam](double a) { return soft(a, lam); });
}

Matrix prox_group_l2(const Matrix& A, double lam) {
    require_threshold(lam, "prox_group_l2");
    Matrix out = A;
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
        const double nrm = A.col(j).norm();
        // a zero column stays zero
        const double scale = nrm > lam ? 1.0 - lam / nrm : 0.0;
        out.col(j) *= scale;
    }
    return out;
}

Vector project_l1_ball(const Eigen::Ref<const Vector>& x, double radius) {
    if (!(radius >= 0.0)) throw std::domain_error("project_l1_ball: negative radius");
    if (x.cwiseAbs().sum() <= radius) return x;
    if (radius == 0.0) return Vector::Zero(x.size());
    std::vector<double> u(static_cast<std::size_t>(x.size()));
    for (Eigen::Index i = 0; i < x.size(); ++i) u[static_cast<std::size_t>(i)] = std::abs(x(i));
    std::sort(u.begin(), u.end(), std::greater<>());
    double cumsum = 0.0;
    double theta = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        cumsum += u[j];
        const double t = (cumsum - radius) / static_cast<double>(j + 1);
        if (u[j] - t > 0.0) theta = t;
    }
    return x.unaryExpr([theta](double a) { return soft(a, theta); });
}

Matrix prox_group_linf(const Matrix& A, double lam) {
    require_threshold(lam, "prox_group_linf");
    Matrix out(A.rows(), A.cols());
    for (Eigen::Index j = 0; j < A.cols(); ++j)
        out.col(j) = A.col(j) - project_l1_ball(A.col(j), lam);
    return out;
}

Matrix prox_columns(const Matrix& A, double lam, NormType q) {
    switch (q) {
        case NormType::L1: return prox_l1(A, lam);
        case NormType::L2: return prox_group_l2(A, lam);
        case NormType::LInf: return prox_group_linf(A, lam);
    }
    throw std::domain_error("prox_columns: unknown norm");
}

std::vector<Matrix> prox_sparse_group(std::span<const Matrix> stack, double lam1, double lam2) {
    require_threshold(lam1, "prox_sparse_group");
    require_threshold(lam2, "prox_sparse_group");
    if (stack.empty()) return {};
    const auto rows = stack.front().rows();
    const auto cols = stack.front().cols();
    for (const auto& m : stack)
        if (m.rows() != rows || m.cols() != cols)
            throw std::domain_error("prox_sparse_group: matrices have mismatched shapes");
    std::vector<Matrix> out;
    out.reserve(stack.size());
    for (const auto& m : stack) out.push_back(prox_l1(m, lam1));
    if (lam2 == 0.0) return out;
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            if (i == j) continue;
            double sq = 0.0;
            for (const auto& m : out) sq += m(i, j) * m(i, j);
            const double nrm = std::sqrt(sq);
            const double scale = nrm > lam2 ? 1.0 - lam2 / nrm : 0.0;
            for (auto& m : out) m(i, j) *= scale;
        }
    }
    return out;
}

}  // namespace njgl
