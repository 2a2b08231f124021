#include "njgl/rcon.hpp"

#include "njgl/likelihood.hpp"
#include "njgl/prox.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace njgl {

namespace {

Matrix stack(std::span<const Matrix> ms) {
    const auto p = ms.front().rows();
    Matrix out(p * static_cast<Eigen::Index>(ms.size()), ms.front().cols());
    for (std::size_t k = 0; k < ms.size(); ++k)
        out.middleRows(static_cast<Eigen::Index>(k) * p, p) = ms[k];
    return out;
}

void unstack(const Matrix& s, std::vector<Matrix>& out) {
    const auto p = out.front().rows();
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = s.middleRows(static_cast<Eigen::Index>(k) * p, p);
}

void require_symmetric(std::span<const Matrix> thetas) {
    if (thetas.empty()) throw std::domain_error("rcon_value: no matrices");
    const auto p = thetas.front().rows();
    for (const auto& t : thetas) {
        if (t.rows() != p || t.cols() != p) throw std::domain_error("rcon_value: shape mismatch");
        const double scale = std::max(1.0, t.cwiseAbs().maxCoeff());
        if ((t - t.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
            throw std::domain_error("rcon_value: input matrix is not symmetric");
    }
}

}  // namespace

RconValue rcon_value(std::span<const Matrix> thetas, NormType q, const RconOptions& opts) {
    require_symmetric(thetas);
    const std::size_t K = thetas.size();
    const auto p = thetas.front().rows();
    RconValue out;

    if (q == NormType::L1) {
        for (const auto& t : thetas) {
            out.value += 0.5 * l1_norm(t);
            out.v.push_back(0.5 * t);
            out.certificate.lambdas.push_back(0.5 * t.unaryExpr([](double a) {
                return static_cast<double>((a > 0.0) - (a < 0.0));
            }));
        }
        out.certificate.max_dual_column_norm = out.value > 0.0 ? 1.0 : 0.0;
        return out;
    }

    double scale = 0.0;
    for (const auto& t : thetas) scale = std::max(scale, t.cwiseAbs().maxCoeff());
    if (scale == 0.0) {
        out.v.assign(K, Matrix::Zero(p, p));
        out.certificate.lambdas.assign(K, Matrix::Zero(p, p));
        return out;
    }

    // Splitting of V^k + V^k^T = Theta^k into V^k + W^k = Theta^k, V^k = W^k^T on the
    // normalized problem; Omega is homogeneous so the value is rescaled at the end.
    std::vector<Matrix> th(K), v(K, Matrix::Zero(p, p)), w(K), f(K, Matrix::Zero(p, p)),
        g(K, Matrix::Zero(p, p)), c(K);
    double theta_norm = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        th[k] = thetas[k] / scale;
        w[k] = 0.5 * th[k];
        theta_norm += th[k].squaredNorm();
    }
    theta_norm = std::sqrt(theta_norm);
    const double rho = 1.0;
    const double tol = opts.tolerance * std::max(1.0, theta_norm);

    int it = 0;
    double primal = 0.0;
    for (; it < opts.max_iterations; ++it) {
        for (std::size_t k = 0; k < K; ++k)
            c[k] = 0.5 * (th[k] - w[k] + w[k].transpose()) + (f[k] - g[k]) / (2.0 * rho);
        unstack(prox_columns(stack(c), 1.0 / (2.0 * rho), q), v);
        double dual = 0.0;
        primal = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            Matrix w_new = 0.5 * (th[k] - v[k] + v[k].transpose()) +
                           (f[k] + g[k].transpose()) / (2.0 * rho);
            dual += (w_new - w[k]).squaredNorm();
            w[k] = std::move(w_new);
            const Matrix r1 = th[k] - v[k] - w[k];
            const Matrix r2 = v[k] - w[k].transpose();
            f[k] += rho * r1;
            g[k] += rho * r2;
            primal += r1.squaredNorm() + r2.squaredNorm();
        }
        primal = std::sqrt(primal);
        dual = rho * std::sqrt(dual);
        if (primal <= tol && dual <= tol) {
            ++it;
            break;
        }
    }

    // Project onto the constraint set: V = Theta/2 + skew(V) satisfies V + V^T = Theta exactly.
    out.v.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
        const Matrix skew = 0.5 * (v[k] - v[k].transpose());
        out.v[k] = scale * (0.5 * th[k] + skew);
    }
    out.value = stacked_column_norm_sum(out.v, q);
    out.iterations = it;
    out.residual = primal / std::max(1.0, theta_norm);
    out.certificate.lambdas = std::move(f);
    const auto report = check_certificate(out.certificate, thetas, q);
    out.certificate.max_dual_column_norm = report.max_dual_norm;
    return out;
}

CertificateReport check_certificate(const RconCertificate& cert, std::span<const Matrix> thetas,
                                    NormType q, std::optional<double> omega) {
    if (cert.lambdas.size() != thetas.size())
        throw std::invalid_argument("check_certificate: one Lambda per class required");
    CertificateReport rep;
    if (thetas.empty()) {
        rep.feasible = true;
        return rep;
    }
    const auto p = thetas.front().rows();
    const double s = dual_exponent(q);
    std::vector<Matrix> sym;
    sym.reserve(cert.lambdas.size());
    for (std::size_t k = 0; k < cert.lambdas.size(); ++k) {
        if (cert.lambdas[k].rows() != p || cert.lambdas[k].cols() != p)
            throw std::invalid_argument("check_certificate: shape mismatch");
        sym.push_back(cert.lambdas[k] + cert.lambdas[k].transpose());
        rep.inner_product += cert.lambdas[k].cwiseProduct(thetas[k]).sum();
    }
    const Matrix st = stack(sym);
    rep.column_dual_norms.resize(static_cast<std::size_t>(p));
    for (Eigen::Index j = 0; j < p; ++j) {
        const double nrm = lp_norm(st.col(j), s);
        rep.column_dual_norms[static_cast<std::size_t>(j)] = nrm;
        rep.max_dual_norm = std::max(rep.max_dual_norm, nrm);
    }
    rep.feasible = rep.max_dual_norm <= 1.0 + kCertificateSlack;
    if (omega) rep.gap = std::abs(rep.inner_product - *omega);
    return rep;
}

}  // namespace njgl
