#pragma once

#include "njgl/types.hpp"

#include <random>

namespace fixture {

using njgl::Matrix;

inline Matrix gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& gen) {
    std::normal_distribution<double> nd;
    Matrix M(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) M(i, j) = nd(gen);
    return M;
}

inline Matrix symmetric(Eigen::Index p, std::mt19937_64& gen) {
    const Matrix A = gaussian(p, p, gen);
    return 0.5 * (A + A.transpose());
}

/// Well-conditioned SPD matrix: B B^T / p + I.
inline Matrix spd(Eigen::Index p, std::mt19937_64& gen) {
    const Matrix B = gaussian(p, p, gen);
    return B * B.transpose() / static_cast<double>(p) + Matrix::Identity(p, p);
}

/// Sample covariance (divisor n, centered) of n standard normal draws.
inline Matrix sample_cov(Eigen::Index p, Eigen::Index n, std::mt19937_64& gen) {
    Matrix X = gaussian(n, p, gen);
    X.rowwise() -= X.colwise().mean();
    return X.transpose() * X / static_cast<double>(n);
}

/// K classes of sample covariances from independent standard normal data.
inline njgl::EmpiricalModel random_model(Eigen::Index p, std::size_t K, Eigen::Index n,
                                         std::mt19937_64& gen) {
    std::vector<njgl::ClassCovariance> cls;
    for (std::size_t k = 0; k < K; ++k) cls.push_back({sample_cov(p, n, gen), double(n)});
    return njgl::EmpiricalModel(std::move(cls));
}

inline double rel_diff(const Matrix& a, const Matrix& b) {
    return (a - b).norm() / std::max(1e-300, b.norm());
}

inline double max_offdiag_abs(const Matrix& M) {
    Matrix o = M;
    o.diagonal().setZero();
    return o.cwiseAbs().maxCoeff();
}

}  // namespace fixture
