#pragma once

#include "njgl/types.hpp"

#include <optional>
#include <span>

namespace njgl {

/// Dual certificate for the row-column overlap norm: matrices Lambda^k that are
/// feasible when every stacked column of (Lambda^k + Lambda^k^T) has dual norm <= 1.
struct RconCertificate {
    std::vector<Matrix> lambdas;
    double max_dual_column_norm = 0.0;
};

struct RconValue {
    double value = 0.0;
    std::vector<Matrix> v;             ///< achieving decomposition, Theta^k = V^k + V^k^T
    RconCertificate certificate;       ///< dual matrices from the splitting iteration
    int iterations = 0;
    double residual = 0.0;             ///< final primal residual of the iteration (normalized)
};

struct RconOptions {
    double tolerance = 1e-8;
    int max_iterations = 50'000;
};

/// Omega_q(Theta^1..Theta^K) = min sum_j ||[V^1; ...; V^K]_j||_q  s.t. Theta^k = V^k + V^k^T.
/// Closed form 1/2 sum_k ||Theta^k||_1 for q = 1; an ADMM splitting otherwise.
RconValue rcon_value(std::span<const Matrix> thetas, NormType q, const RconOptions& opts = {});

struct CertificateReport {
    std::vector<double> column_dual_norms;
    double max_dual_norm = 0.0;
    bool feasible = false;
    double inner_product = 0.0;        ///< sum_k <Lambda^k, Theta^k>
    std::optional<double> gap;         ///< |inner_product - omega| when omega is supplied
};

inline constexpr double kCertificateSlack = 1e-6;

CertificateReport check_certificate(const RconCertificate& cert, std::span<const Matrix> thetas,
                                    NormType q, std::optional<double> omega = std::nullopt);

}  // namespace njgl
