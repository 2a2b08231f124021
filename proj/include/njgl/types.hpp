#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace njgl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Column norm used inside the row-column overlap penalty.
enum class NormType { L1, L2, LInf };

/// Parses "1", "2", "inf" (also "infinity"). Throws std::invalid_argument otherwise.
NormType parse_norm(const std::string& text);
std::string to_string(NormType q);

/// Dual exponent s with 1/s + 1/q = 1 (+infinity for q = 1).
double dual_exponent(NormType q);

/// Norm of a vector in the family indexed by an exponent (1, 2 or +infinity).
double lp_norm(const Eigen::Ref<const Vector>& x, double exponent);
double column_norm(const Eigen::Ref<const Vector>& x, NormType q);

/// Per-class sample covariance and sample count.
struct ClassCovariance {
    Matrix S;
    double n = 0.0;
};

/// Sample covariances S^k with counts n_k for K classes over p features.
///
/// Inputs are symmetrized as (S + S^T)/2 on construction; a warning is written
/// to std::clog when the correction exceeds 1e-8 in absolute value.
class EmpiricalModel {
public:
    EmpiricalModel() = default;
    explicit EmpiricalModel(std::vector<ClassCovariance> classes);

    std::size_t p() const noexcept { return p_; }
    std::size_t K() const noexcept { return classes_.size(); }
    const Matrix& S(std::size_t k) const { return classes_.at(k).S; }
    double n(std::size_t k) const { return classes_.at(k).n; }
    const std::vector<ClassCovariance>& classes() const noexcept { return classes_; }

    /// Principal submatrix model on the given (sorted) feature indices.
    EmpiricalModel restrict_to(const std::vector<std::size_t>& idx) const;

private:
    std::vector<ClassCovariance> classes_;
    std::size_t p_ = 0;
};

struct PenaltyConfig {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    NormType q = NormType::L2;

    double s() const { return dual_exponent(q); }
    /// Throws std::invalid_argument on negative or non-finite lambdas.
    void validate() const;
};

/// Estimated precision matrices plus solver by-products.
///
/// `v` holds the RCON decomposition: one matrix for PNJGL (Theta1 - Theta2 = V + V^T),
/// K matrices for CNJGL (Theta^k - diag(Theta^k) = V^k + (V^k)^T). `duals` holds the
/// dual certificate matrices Lambda^k for the RCON term when a solver produces them.
struct PrecisionSet {
    std::vector<Matrix> thetas;
    std::vector<Matrix> v;
    std::vector<Matrix> duals;
};

/// Partition of {0..p-1} into disjoint blocks; members ascending, blocks ordered
/// by smallest member.
struct BlockPartition {
    std::size_t p = 0;
    std::vector<std::vector<std::size_t>> blocks;

    /// block id per feature
    std::vector<std::size_t> labels() const;
    /// true iff (i, j) lies in the block-diagonal support T
    bool in_support(std::size_t i, std::size_t j) const;
    /// Throws std::invalid_argument unless blocks are nonempty, disjoint and cover {0..p-1}.
    void validate() const;

    static BlockPartition single_block(std::size_t p);
};

constexpr double kInf = std::numeric_limits<double>::infinity();

inline Matrix symmetrize(const Matrix& A) { return 0.5 * (A + A.transpose()); }
inline Matrix offdiag(const Matrix& A) {
    Matrix out = A;
    out.diagonal().setZero();
    return out;
}
/// Sum of absolute values of all entries, diagonal included.
inline double l1_norm(const Matrix& A) { return A.cwiseAbs().sum(); }

}  // namespace njgl
