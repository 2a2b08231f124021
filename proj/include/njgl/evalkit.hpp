#pragma once

#include "njgl/admm.hpp"
#include "njgl/methods.hpp"
#include "njgl/types.hpp"

#include <cstdint>
#include <optional>
#include <span>

namespace njgl {

struct MetricConfig {
    double t0 = 1e-6;             ///< edge threshold
    double ts_multiplier = 5.5;   ///< t_s = mean + multiplier * std of a column-score vector

    void validate() const;
};

struct EdgeCounts {
    std::size_t positives = 0;
    std::size_t true_positives = 0;
};

/// Counts over i < j in every class: |estimate| > t0, and additionally |truth| > t0.
EdgeCounts edge_metrics(std::span<const Matrix> truth, std::span<const Matrix> estimates,
                        const MetricConfig& cfg = {});

/// l2 norm of each column with its diagonal entry removed.
Vector column_scores(const Matrix& M);

/// mean + multiplier * std of the scores (population standard deviation, divisor p).
double score_threshold(const Vector& scores, double multiplier);

struct NodeCounts {
    std::size_t positives = 0;
    std::size_t true_positives = 0;
    std::vector<Vector> scores;      ///< one vector per scored matrix
    std::vector<double> thresholds;  ///< matching t_s values
};

/// Perturbed-column counts. PNJGL scores the columns of V; FGL and GL score Theta1 - Theta2.
NodeCounts perturbed_node_scores(Method method, const PrecisionSet& estimate,
                                 std::span<const std::size_t> perturbed_idx,
                                 const MetricConfig& cfg = {});

/// Co-hub counts: a column is positive when it exceeds t_s in both classes. CNJGL scores
/// V^1 and V^2; GGL and GL score Theta1 and Theta2.
NodeCounts cohub_node_scores(Method method, const PrecisionSet& estimate,
                             std::span<const std::size_t> cohub_idx, const MetricConfig& cfg = {});

/// sum over classes of sqrt(sum_{i<j} (truth_ij - estimate_ij)^2)
double frobenius_error(std::span<const Matrix> truth, std::span<const Matrix> estimates);

struct MetricReport {
    EdgeCounts edges;
    std::optional<NodeCounts> perturbed;  ///< PNJGL, FGL, GL
    std::optional<NodeCounts> cohub;      ///< CNJGL, GGL, GL
    double frobenius_error = 0.0;
};

MetricReport compute_metrics(Method method, std::span<const Matrix> truth,
                             const PrecisionSet& estimate,
                             std::span<const std::size_t> perturbed_idx,
                             std::span<const std::size_t> cohub_idx, const MetricConfig& cfg = {});

struct GridPoint {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
};

struct CvOptions {
    std::size_t folds = 5;
    std::uint64_t seed = 1;
    NormType q = NormType::L2;
    AdmmOptions admm;
    MetricConfig metrics;
};

struct CvRow {
    GridPoint point;
    double mean_loglik = 0.0;        ///< mean over scored folds
    double sd_loglik = 0.0;          ///< sample std over scored folds
    double mean_positive_edges = 0.0;
    std::size_t scored_folds = 0;
    std::size_t failed_folds = 0;    ///< solver threw or returned a non-SPD estimate
    std::size_t unconverged_folds = 0;
};

/// Fold label of each row of every class: a seeded permutation per class, label =
/// position mod folds. Classes draw from one stream in order.
std::vector<std::vector<std::size_t>> fold_assignment(std::span<const std::size_t> class_sizes,
                                                      std::size_t folds, std::uint64_t seed);

/// sum_k (log det Theta^k - tr(S_test^k Theta^k)), unweighted.
double heldout_loglik(std::span<const Matrix> thetas, std::span<const Matrix> test_covariances);

/// K-fold cross-validated held-out log-likelihood over a grid. Training covariances use the
/// training rows (divisor n_train, which is also the class weight); test covariances are
/// centered with the training means. Grid points run concurrently, rows come back in grid
/// order. Throws std::invalid_argument when a class has fewer rows than folds.
std::vector<CvRow> cross_validate(std::span<const Matrix> raw, Method method,
                                  std::span<const GridPoint> grid, const CvOptions& opts);

}  // namespace njgl
