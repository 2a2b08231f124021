#include "njgl/datagen.hpp"

#include "njgl/prox.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace njgl {

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
}

std::size_t Rng::index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("Rng::index: empty range");
    const std::uint64_t range = n;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
    std::uint64_t x;
    do x = engine_();
    while (x >= limit);
    return static_cast<std::size_t>(x % range);
}

Network parse_network(const std::string& text) {
    if (text == "erdos") return Network::Erdos;
    if (text == "scalefree") return Network::ScaleFree;
    if (text == "community") return Network::Community;
    throw std::invalid_argument("unknown network '" + text +
                                "' (expected erdos|scalefree|community)");
}

std::string to_string(Network n) {
    switch (n) {
        case Network::Erdos: return "erdos";
        case Network::ScaleFree: return "scalefree";
        case Network::Community: return "community";
    }
    return "unknown";
}

void GenOptions::validate() const {
    if (p < 8) throw std::invalid_argument("p must be at least 8");
    if (n < 2) throw std::invalid_argument("n must be at least 2");
    if (n_perturbed + n_cohub > p)
        throw std::invalid_argument("more perturbed and co-hub nodes than features");
    if (!(edge_probability >= 0.0 && edge_probability <= 1.0))
        throw std::invalid_argument("edge probability must lie in [0, 1]");
}

EmpiricalModel SyntheticDataset::model() const {
    const double n = static_cast<double>(X1.rows());
    return EmpiricalModel({{S1, n}, {S2, static_cast<double>(X2.rows())}});
}

double draw_edge_weight(Rng& rng) {
    const double mag = 0.3 + 0.3 * rng.uniform();
    return rng.coin() ? mag : -mag;
}

Matrix scale_free_adjacency(std::size_t p, Rng& rng) {
    if (p < 3) throw std::invalid_argument("scale-free graph needs p >= 3");
    const auto P = static_cast<Eigen::Index>(p);
    Matrix adj = Matrix::Zero(P, P);
    std::vector<std::size_t> ends;  // each edge contributes both endpoints
    auto link = [&](std::size_t a, std::size_t b) {
        adj(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = 1.0;
        adj(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = 1.0;
        ends.push_back(a);
        ends.push_back(b);
    };
    link(0, 1);
    link(1, 2);
    link(0, 2);
    constexpr int m = 2;
    for (std::size_t t = 3; t < p; ++t) {
        std::size_t chosen[m];
        for (int k = 0; k < m; ++k) {
            std::size_t cand;
            do cand = ends[rng.index(ends.size())];
            while (k > 0 && cand == chosen[0]);
            chosen[k] = cand;
        }
        for (std::size_t c : chosen) link(t, c);
    }
    return adj;
}

Matrix sample_gaussian(const Matrix& theta, std::size_t n, Rng& rng) {
    const auto p = theta.rows();
    const Matrix sigma = symmetrize(theta.llt().solve(Matrix::Identity(p, p)));
    Eigen::LLT<Matrix> llt(sigma);
    if (llt.info() != Eigen::Success)
        throw std::domain_error("sample_gaussian: covariance is not positive definite");
    const Matrix L = llt.matrixL();
    Matrix Z(static_cast<Eigen::Index>(n), p);
    for (Eigen::Index i = 0; i < Z.rows(); ++i)
        for (Eigen::Index j = 0; j < p; ++j) Z(i, j) = rng.normal();
    return Z * L.transpose();
}

Matrix centered_covariance(const Matrix& X, const Vector& mean) {
    const Matrix Xc = X.rowwise() - mean.transpose();
    return symmetrize(Xc.transpose() * Xc / static_cast<double>(X.rows()));
}

Matrix sample_covariance(const Matrix& X) {
    return centered_covariance(X, X.colwise().mean().transpose());
}

SyntheticDataset generate(Network network, const GenOptions& opts) {
    opts.validate();
    Rng rng(opts.seed);
    const std::size_t p = opts.p;
    const auto P = static_cast<Eigen::Index>(p);

    // Step 1: base network
    Matrix A = Matrix::Zero(P, P);
    if (network == Network::ScaleFree) {
        const Matrix adj = scale_free_adjacency(p, rng);
        for (Eigen::Index j = 0; j < P; ++j)
            for (Eigen::Index i = 0; i < j; ++i)
                if (adj(i, j) != 0.0) A(i, j) = A(j, i) = draw_edge_weight(rng);
    } else {
        for (Eigen::Index j = 0; j < P; ++j)
            for (Eigen::Index i = 0; i < j; ++i)
                if (rng.uniform() < opts.edge_probability) A(i, j) = A(j, i) = draw_edge_weight(rng);
    }

    SyntheticDataset out;
    auto& truth = out.truth;
    truth.base = A;
    truth.seed = opts.seed;
    truth.network = network;

    // distinct special nodes: perturbed first, then co-hubs
    std::vector<std::size_t> pool(p);
    std::iota(pool.begin(), pool.end(), 0);
    const std::size_t n_special = opts.n_perturbed + opts.n_cohub;
    for (std::size_t k = 0; k < n_special; ++k) std::swap(pool[k], pool[k + rng.index(p - k)]);
    truth.perturbed_idx.assign(pool.begin(), pool.begin() + opts.n_perturbed);
    truth.cohub_idx.assign(pool.begin() + opts.n_perturbed, pool.begin() + n_special);

    auto redraw = [&](Matrix& M, std::size_t node) {
        const auto c = static_cast<Eigen::Index>(node);
        for (Eigen::Index i = 0; i < P; ++i)
            if (i != c) M(i, c) = M(c, i) = draw_edge_weight(rng);
    };

    // Step 2: perturbed nodes, one class each by a fair coin
    Matrix A1 = A, A2 = A;
    for (std::size_t node : truth.perturbed_idx) {
        const bool first = rng.coin();
        truth.perturbed_class.push_back(first ? 1 : 2);
        redraw(first ? A1 : A2, node);
    }
    // Step 3: co-hubs, identical in both classes
    for (std::size_t node : truth.cohub_idx) {
        const auto c = static_cast<Eigen::Index>(node);
        redraw(A1, node);
        A2.row(c) = A1.row(c);
        A2.col(c) = A1.col(c);
    }
    if (network == Network::Community) {
        const auto lo = static_cast<Eigen::Index>(std::lround(0.4 * static_cast<double>(p)));
        const auto hi = static_cast<Eigen::Index>(std::lround(0.6 * static_cast<double>(p)));
        for (Matrix* M : {&A1, &A2}) {
            M->block(0, hi, lo, P - hi).setZero();
            M->block(hi, 0, P - hi, lo).setZero();
        }
    }

    // Step 4: common diagonal shift
    const double c = std::min(symmetric_eigen(A1).d.minCoeff(), symmetric_eigen(A2).d.minCoeff());
    truth.shift = 0.1 + std::abs(c);
    truth.theta1 = A1 + truth.shift * Matrix::Identity(P, P);
    truth.theta2 = A2 + truth.shift * Matrix::Identity(P, P);

    // Step 5: samples and covariances
    out.X1 = sample_gaussian(truth.theta1, opts.n, rng);
    out.X2 = sample_gaussian(truth.theta2, opts.n, rng);
    out.S1 = sample_covariance(out.X1);
    out.S2 = sample_covariance(out.X2);
    return out;
}

SyntheticDataset gen_erdos(std::size_t p, std::size_t n, std::uint64_t seed) {
    return generate(Network::Erdos, {p, n, seed});
}

SyntheticDataset gen_scalefree(std::size_t p, std::size_t n, std::uint64_t seed) {
    return generate(Network::ScaleFree, {p, n, seed});
}

SyntheticDataset gen_community(std::size_t p, std::size_t n, std::uint64_t seed) {
    return generate(Network::Community, {p, n, seed});
}

}  // namespace njgl
