#include "njgl/evalkit.hpp"

#include "njgl/datagen.hpp"
#include "njgl/likelihood.hpp"
#include "njgl/screening.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace njgl {

namespace {

void require_same_shapes(std::span<const Matrix> a, std::span<const Matrix> b, const char* what) {
    if (a.size() != b.size())
        throw std::invalid_argument(std::string(what) + ": class counts differ");
    for (std::size_t k = 0; k < a.size(); ++k)
        if (a[k].rows() != b[k].rows() || a[k].cols() != b[k].cols())
            throw std::invalid_argument(std::string(what) + ": matrix shapes differ");
}

std::size_t count_members(const std::vector<bool>& positive, std::span<const std::size_t> idx) {
    std::size_t c = 0;
    for (std::size_t i : idx)
        if (i < positive.size() && positive[i]) ++c;
    return c;
}

NodeCounts count_columns(std::span<const Matrix> scored, std::span<const std::size_t> idx,
                         const MetricConfig& cfg) {
    cfg.validate();
    NodeCounts out;
    const auto p = static_cast<std::size_t>(scored.front().cols());
    std::vector<bool> positive(p, true);
    for (const auto& M : scored) {
        out.scores.push_back(column_scores(M));
        out.thresholds.push_back(score_threshold(out.scores.back(), cfg.ts_multiplier));
        for (std::size_t i = 0; i < p; ++i)
            if (!(out.scores.back()(static_cast<Eigen::Index>(i)) > out.thresholds.back()))
                positive[i] = false;
    }
    out.positives = static_cast<std::size_t>(std::count(positive.begin(), positive.end(), true));
    out.true_positives = count_members(positive, idx);
    return out;
}

}  // namespace

void MetricConfig::validate() const {
    if (!(t0 > 0.0)) throw std::invalid_argument("t0 must be positive");
    if (!(ts_multiplier > 0.0)) throw std::invalid_argument("t_s multiplier must be positive");
}

EdgeCounts edge_metrics(std::span<const Matrix> truth, std::span<const Matrix> estimates,
                        const MetricConfig& cfg) {
    cfg.validate();
    require_same_shapes(truth, estimates, "edge_metrics");
    EdgeCounts out;
    for (std::size_t k = 0; k < truth.size(); ++k) {
        const auto p = truth[k].rows();
        for (Eigen::Index j = 0; j < p; ++j)
            for (Eigen::Index i = 0; i < j; ++i) {
                if (!(std::abs(estimates[k](i, j)) > cfg.t0)) continue;
                ++out.positives;
                if (std::abs(truth[k](i, j)) > cfg.t0) ++out.true_positives;
            }
    }
    return out;
}

Vector column_scores(const Matrix& M) {
    Vector s(M.cols());
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
        double sq = M.col(j).squaredNorm();
        if (j < M.rows()) sq -= M(j, j) * M(j, j);
        s(j) = std::sqrt(std::max(sq, 0.0));
    }
    return s;
}

double score_threshold(const Vector& scores, double multiplier) {
    if (scores.size() == 0) return 0.0;
    const double mean = scores.mean();
    const double var = (scores.array() - mean).square().mean();
    return mean + multiplier * std::sqrt(var);
}

NodeCounts perturbed_node_scores(Method method, const PrecisionSet& estimate,
                                 std::span<const std::size_t> perturbed_idx,
                                 const MetricConfig& cfg) {
    switch (method) {
        case Method::Pnjgl: {
            if (estimate.v.size() != 1)
                throw std::invalid_argument("PNJGL perturbed-node scores need the solver's V");
            return count_columns(std::span(estimate.v.data(), 1), perturbed_idx, cfg);
        }
        case Method::Fgl:
        case Method::Gl: {
            if (estimate.thetas.size() != 2)
                throw std::invalid_argument("perturbed-node scores need two estimates");
            const Matrix diff = estimate.thetas[0] - estimate.thetas[1];
            return count_columns(std::span(&diff, 1), perturbed_idx, cfg);
        }
        default:
            throw std::invalid_argument("perturbed-node scores are defined for pnjgl, fgl and gl");
    }
}

NodeCounts cohub_node_scores(Method method, const PrecisionSet& estimate,
                             std::span<const std::size_t> cohub_idx, const MetricConfig& cfg) {
    switch (method) {
        case Method::Cnjgl:
            if (estimate.v.size() != 2)
                throw std::invalid_argument("CNJGL co-hub scores need V^1 and V^2");
            return count_columns(estimate.v, cohub_idx, cfg);
        case Method::Ggl:
        case Method::Gl:
            if (estimate.thetas.size() != 2)
                throw std::invalid_argument("co-hub scores need two estimates");
            return count_columns(estimate.thetas, cohub_idx, cfg);
        default:
            throw std::invalid_argument("co-hub scores are defined for cnjgl, ggl and gl");
    }
}

double frobenius_error(std::span<const Matrix> truth, std::span<const Matrix> estimates) {
    require_same_shapes(truth, estimates, "frobenius_error");
    double total = 0.0;
    for (std::size_t k = 0; k < truth.size(); ++k) {
        const Matrix d = truth[k] - estimates[k];
        total += d.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().norm();
    }
    return total;
}

MetricReport compute_metrics(Method method, std::span<const Matrix> truth,
                             const PrecisionSet& estimate,
                             std::span<const std::size_t> perturbed_idx,
                             std::span<const std::size_t> cohub_idx, const MetricConfig& cfg) {
    MetricReport r;
    r.edges = edge_metrics(truth, estimate.thetas, cfg);
    r.frobenius_error = frobenius_error(truth, estimate.thetas);
    if (method == Method::Pnjgl || method == Method::Fgl || method == Method::Gl)
        r.perturbed = perturbed_node_scores(method, estimate, perturbed_idx, cfg);
    if (method == Method::Cnjgl || method == Method::Ggl || method == Method::Gl)
        r.cohub = cohub_node_scores(method, estimate, cohub_idx, cfg);
    return r;
}

std::vector<std::vector<std::size_t>> fold_assignment(std::span<const std::size_t> class_sizes,
                                                      std::size_t folds, std::uint64_t seed) {
    if (folds < 2) throw std::invalid_argument("at least 2 folds are required");
    Rng rng(seed);
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t k = 0; k < class_sizes.size(); ++k) {
        const std::size_t n = class_sizes[k];
        if (n < folds)
            throw std::invalid_argument("class " + std::to_string(k + 1) + " has " +
                                        std::to_string(n) + " rows, fewer than " +
                                        std::to_string(folds) + " folds");
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.index(i)]);
        std::vector<std::size_t> label(n);
        for (std::size_t pos = 0; pos < n; ++pos) label[perm[pos]] = pos % folds;
        out.push_back(std::move(label));
    }
    return out;
}

double heldout_loglik(std::span<const Matrix> thetas, std::span<const Matrix> test_covariances) {
    require_same_shapes(thetas, test_covariances, "heldout_loglik");
    double total = 0.0;
    for (std::size_t k = 0; k < thetas.size(); ++k)
        total += log_det_spd(thetas[k], "estimate of class " + std::to_string(k + 1)) -
                 (test_covariances[k].cwiseProduct(thetas[k])).sum();
    return total;
}

std::vector<CvRow> cross_validate(std::span<const Matrix> raw, Method method,
                                  std::span<const GridPoint> grid, const CvOptions& opts) {
    if (raw.empty()) throw std::invalid_argument("cross_validate: no data");
    check_method_classes(method, raw.size());
    opts.admm.validate();
    opts.metrics.validate();
    const auto p = raw.front().cols();
    std::vector<std::size_t> sizes;
    for (const auto& X : raw) {
        if (X.cols() != p) throw std::invalid_argument("cross_validate: feature counts differ");
        if (!X.allFinite()) throw std::invalid_argument("cross_validate: non-finite data");
        sizes.push_back(static_cast<std::size_t>(X.rows()));
    }
    for (const auto& g : grid) PenaltyConfig{g.lambda1, g.lambda2, opts.q}.validate();
    const auto labels = fold_assignment(sizes, opts.folds, opts.seed);
    const std::size_t K = raw.size();

    // fold data is shared by every grid point
    struct FoldData {
        EmpiricalModel train;
        std::vector<Matrix> test_cov;
    };
    std::vector<FoldData> folds;
    for (std::size_t f = 0; f < opts.folds; ++f) {
        std::vector<ClassCovariance> train;
        std::vector<Matrix> test_cov;
        for (std::size_t k = 0; k < K; ++k) {
            std::vector<Eigen::Index> tr, te;
            for (std::size_t r = 0; r < sizes[k]; ++r)
                (labels[k][r] == f ? te : tr).push_back(static_cast<Eigen::Index>(r));
            const Matrix Xtr = raw[k](tr, Eigen::all);
            const Matrix Xte = raw[k](te, Eigen::all);
            const Vector mean = Xtr.colwise().mean().transpose();
            train.push_back({centered_covariance(Xtr, mean), static_cast<double>(tr.size())});
            test_cov.push_back(centered_covariance(Xte, mean));
        }
        folds.push_back({EmpiricalModel(std::move(train)), std::move(test_cov)});
    }

    std::vector<CvRow> rows(grid.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t g; (g = next.fetch_add(1)) < grid.size();) {
            CvRow& row = rows[g];
            row.point = grid[g];
            const PenaltyConfig cfg{grid[g].lambda1, grid[g].lambda2, opts.q};
            std::vector<double> scores;
            double edges = 0.0;
            for (const auto& fd : folds) {
                try {
                    MethodSolution s = solve_method(method, fd.train, cfg, opts.admm);
                    if (!s.diagnostics.converged()) ++row.unconverged_folds;
                    scores.push_back(heldout_loglik(s.estimate.thetas, fd.test_cov));
                    edges += static_cast<double>(
                        edge_metrics(s.estimate.thetas, s.estimate.thetas, opts.metrics).positives);
                } catch (const std::exception&) {
                    ++row.failed_folds;
                }
            }
            row.scored_folds = scores.size();
            if (scores.empty()) {
                row.mean_loglik = row.sd_loglik = row.mean_positive_edges =
                    std::numeric_limits<double>::quiet_NaN();
                continue;
            }
            const double m = std::accumulate(scores.begin(), scores.end(), 0.0) /
                             static_cast<double>(scores.size());
            double ss = 0.0;
            for (double v : scores) ss += (v - m) * (v - m);
            row.mean_loglik = m;
            row.sd_loglik =
                scores.size() > 1 ? std::sqrt(ss / static_cast<double>(scores.size() - 1)) : 0.0;
            row.mean_positive_edges = edges / static_cast<double>(scores.size());
        }
    };
    const std::size_t nthreads = std::min(thread_limit(), std::max<std::size_t>(1, grid.size()));
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    }
    return rows;
}

}  // namespace njgl
