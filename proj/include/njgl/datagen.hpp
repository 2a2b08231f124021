#pragma once

#include "njgl/types.hpp"

#include <cstdint>
#include <random>
#include <string>

namespace njgl {

inline constexpr const char* kGeneratorVersion = "njgl-datagen/1 (mt19937_64)";

/// Seeded random stream. Uniform and normal variates are derived from the raw 64-bit
/// engine output by fixed formulas, so a seed produces the same numbers on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Standard normal (Marsaglia polar method).
    double normal();
    /// Uniform integer in [0, n), unbiased.
    std::size_t index(std::size_t n);
    bool coin() { return (engine_() >> 63) != 0; }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

enum class Network { Erdos, ScaleFree, Community };

/// "erdos", "scalefree", "community"; throws std::invalid_argument otherwise.
Network parse_network(const std::string& text);
std::string to_string(Network n);

struct GenOptions {
    std::size_t p = 100;
    std::size_t n = 50;
    std::uint64_t seed = 1;
    std::size_t n_perturbed = 2;
    std::size_t n_cohub = 2;
    double edge_probability = 0.02;  ///< Erdos-Renyi base graph

    /// Throws std::invalid_argument for p < 8, n < 2, or too many special nodes.
    void validate() const;
};

struct SyntheticTruth {
    Matrix theta1, theta2;
    Matrix base;                          ///< symmetric base weights before node edits
    std::vector<std::size_t> perturbed_idx;
    std::vector<int> perturbed_class;     ///< 1 or 2: which class received the new row/column
    std::vector<std::size_t> cohub_idx;
    double shift = 0.0;                   ///< 0.1 + |c|
    std::uint64_t seed = 0;
    Network network = Network::Erdos;
};

struct SyntheticDataset {
    SyntheticTruth truth;
    Matrix X1, X2;  ///< n x p samples
    Matrix S1, S2;  ///< column-centered sample covariances (divisor n)

    EmpiricalModel model() const;
};

/// Draws from Unif([-0.6, -0.3] u [0.3, 0.6]).
double draw_edge_weight(Rng& rng);

SyntheticDataset generate(Network network, const GenOptions& opts);
SyntheticDataset gen_erdos(std::size_t p, std::size_t n, std::uint64_t seed);
SyntheticDataset gen_scalefree(std::size_t p, std::size_t n, std::uint64_t seed);
SyntheticDataset gen_community(std::size_t p, std::size_t n, std::uint64_t seed);

/// Preferential attachment with two links per new node, seeded from a triangle on nodes
/// 0, 1, 2. Returns the 0/1 adjacency (2p - 3 edges).
Matrix scale_free_adjacency(std::size_t p, Rng& rng);

/// n x p draws from N(0, theta^{-1}).
Matrix sample_gaussian(const Matrix& theta, std::size_t n, Rng& rng);

/// (X - 1 mean^T)^T (X - 1 mean^T) / rows(X)
Matrix centered_covariance(const Matrix& X, const Vector& mean);
/// Column-centered covariance with divisor rows(X).
Matrix sample_covariance(const Matrix& X);

}  // namespace njgl
