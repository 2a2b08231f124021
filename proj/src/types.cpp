#include "njgl/types.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace njgl {

NormType parse_norm(const std::string& text) {
    if (text == "1") return NormType::L1;
    if (text == "2") return NormType::L2;
    if (text == "inf" || text == "infinity" || text == "Inf") return NormType::LInf;
    throw std::invalid_argument("unknown norm exponent '" + text + "' (expected 1, 2 or inf)");
}

std::string to_string(NormType q) {
    switch (q) {
        case NormType::L1: return "1";
        case NormType::L2: return "2";
        case NormType::LInf: return "inf";
    }
    return "?";
}

double dual_exponent(NormType q) {
    switch (q) {
        case NormType::L1: return kInf;
        case NormType::L2: return 2.0;
        case NormType::LInf: return 1.0;
    }
    return 2.0;
}

double lp_norm(const Eigen::Ref<const Vector>& x, double exponent) {
    if (exponent == 1.0) return x.cwiseAbs().sum();
    if (exponent == 2.0) return x.norm();
    if (std::isinf(exponent)) return x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff();
    throw std::invalid_argument("lp_norm: only exponents 1, 2 and inf are supported");
}

double column_norm(const Eigen::Ref<const Vector>& x, NormType q) {
    switch (q) {
        case NormType::L1: return x.cwiseAbs().sum();
        case NormType::L2: return x.norm();
        case NormType::LInf: return x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff();
    }
    return 0.0;
}

EmpiricalModel::EmpiricalModel(std::vector<ClassCovariance> classes) : classes_(std::move(classes)) {
    if (classes_.empty()) throw std::invalid_argument("EmpiricalModel: need at least one class");
    p_ = static_cast<std::size_t>(classes_.front().S.rows());
    for (std::size_t k = 0; k < classes_.size(); ++k) {
        auto& c = classes_[k];
        if (c.S.rows() != c.S.cols() || static_cast<std::size_t>(c.S.rows()) != p_)
            throw std::invalid_argument("EmpiricalModel: class " + std::to_string(k) +
                                        " covariance is not " + std::to_string(p_) + "x" +
                                        std::to_string(p_));
        if (!(c.n >= 1.0) || !std::isfinite(c.n))
            throw std::invalid_argument("EmpiricalModel: class " + std::to_string(k) +
                                        " needs a sample count >= 1");
        if (!c.S.allFinite())
            throw std::invalid_argument("EmpiricalModel: class " + std::to_string(k) +
                                        " covariance has non-finite entries");
        const double asym = (c.S - c.S.transpose()).cwiseAbs().maxCoeff();
        if (asym > 1e-8)
            std::clog << "warning: covariance of class " << k << " asymmetric by " << asym
                      << "; symmetrizing\n";
        c.S = symmetrize(c.S);
    }
    if (p_ == 0) throw std::invalid_argument("EmpiricalModel: empty covariance");
}

EmpiricalModel EmpiricalModel::restrict_to(const std::vector<std::size_t>& idx) const {
    for (std::size_t a = 0; a < idx.size(); ++a)
        if (idx[a] >= p_ || (a > 0 && idx[a] <= idx[a - 1]))
            throw std::invalid_argument("restrict_to: indices must be ascending and below p");
    std::vector<ClassCovariance> sub;
    sub.reserve(classes_.size());
    const auto m = static_cast<Eigen::Index>(idx.size());
    for (const auto& c : classes_) {
        Matrix S(m, m);
        for (Eigen::Index a = 0; a < m; ++a)
            for (Eigen::Index b = 0; b < m; ++b)
                S(a, b) = c.S(static_cast<Eigen::Index>(idx[a]), static_cast<Eigen::Index>(idx[b]));
        sub.push_back({std::move(S), c.n});
    }
    return EmpiricalModel(std::move(sub));
}

void PenaltyConfig::validate() const {
    if (!(lambda1 >= 0.0) || !std::isfinite(lambda1))
        throw std::invalid_argument("lambda1 must be a finite nonnegative number");
    if (!(lambda2 >= 0.0) || !std::isfinite(lambda2))
        throw std::invalid_argument("lambda2 must be a finite nonnegative number");
}

std::vector<std::size_t> BlockPartition::labels() const {
    std::vector<std::size_t> out(p, blocks.size());
    for (std::size_t b = 0; b < blocks.size(); ++b)
        for (auto i : blocks[b]) out.at(i) = b;
    return out;
}

bool BlockPartition::in_support(std::size_t i, std::size_t j) const {
    // linear scan is fine for the sizes this is used at; hot paths use labels()
    for (const auto& blk : blocks) {
        const bool hi = std::binary_search(blk.begin(), blk.end(), i);
        if (hi) return std::binary_search(blk.begin(), blk.end(), j);
    }
    return false;
}

void BlockPartition::validate() const {
    std::vector<int> seen(p, 0);
    for (const auto& blk : blocks) {
        if (blk.empty()) throw std::invalid_argument("BlockPartition: empty block");
        for (auto i : blk) {
            if (i >= p) throw std::invalid_argument("BlockPartition: index out of range");
            if (seen[i]++) throw std::invalid_argument("BlockPartition: blocks overlap");
        }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end())
        throw std::invalid_argument("BlockPartition: blocks do not cover all features");
}

BlockPartition BlockPartition::single_block(std::size_t p) {
    BlockPartition part;
    part.p = p;
    part.blocks.emplace_back(p);
    for (std::size_t i = 0; i < p; ++i) part.blocks[0][i] = i;
    return part;
}

}  // namespace njgl
