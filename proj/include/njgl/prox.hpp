#pragma once

#include "njgl/types.hpp"

#include <span>

namespace njgl {

struct EigenDecomposition {
    Matrix U;
    Vector d;
};

/// Dense symmetric eigendecomposition. Throws std::domain_error on non-symmetric
/// input (beyond 1e-10 relative) or solver failure.
EigenDecomposition symmetric_eigen(const Matrix& A);

/// argmin_{Theta SPD} -n log det(Theta) + rho ||Theta - A||_F^2
///   = 1/2 U (D + sqrt(D^2 + 2n/rho I)) U^T   for A = U D U^T.
Matrix expand(const Matrix& A, double rho, double n);

/// Elementwise soft-thresholding sign(a) max(|a| - lam, 0).
Matrix prox_l1(const Matrix& A, double lam);

/// Column-wise group soft-scaling: A_j -> max(0, 1 - lam/||A_j||_2) A_j.
Matrix prox_group_l2(const Matrix& A, double lam);

/// Column-wise prox of lam ||.||_inf, computed as A_j - Proj_{lam B_1}(A_j).
Matrix prox_group_linf(const Matrix& A, double lam);

/// The operator T_q(A, lam) = argmin_X 1/2 ||X - A||_F^2 + lam sum_j ||X_j||_q.
Matrix prox_columns(const Matrix& A, double lam, NormType q);

/// Euclidean projection onto { x : ||x||_1 <= radius } (sort-based, exact).
Vector project_l1_ball(const Eigen::Ref<const Vector>& x, double radius);

/// Sparse-group prox over K aligned matrices: at each off-diagonal position the K-vector
/// is soft-thresholded by lam1 and then scaled by max(0, 1 - lam2/||.||_2); diagonal
/// positions only receive the lam1 soft-threshold.
std::vector<Matrix> prox_sparse_group(std::span<const Matrix> stack, double lam1, double lam2);

}  // namespace njgl
