#include "njgl/screening.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace njgl {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

void check_partition(const EmpiricalModel& model, const BlockPartition& partition) {
    partition.validate();
    if (partition.p != model.p())
        throw std::invalid_argument("partition covers " + std::to_string(partition.p) +
                                    " features, model has " + std::to_string(model.p()));
}

// Shared conditions over T^c for any number of classes.
ScreenReport evaluate(const EmpiricalModel& model, const PenaltyConfig& cfg,
                      const BlockPartition& partition, bool with_sum) {
    check_partition(model, partition);
    cfg.validate();
    const std::size_t p = model.p();
    const std::size_t K = model.K();
    const auto labels = partition.labels();

    ScreenReport r;
    r.partition = partition;
    r.sufficient_holds = true;
    std::vector<double> abs_sum(K, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
        for (std::size_t i = 0; i < p; ++i) {
            if (labels[i] == labels[j]) continue;
            ++r.offblock_count;
            const auto ii = static_cast<Eigen::Index>(i);
            const auto jj = static_cast<Eigen::Index>(j);
            for (std::size_t k = 0; k < K; ++k) {
                const double a = model.n(k) * std::abs(model.S(k)(ii, jj));
                if (a > cfg.lambda1) r.sufficient_holds = false;
                if (a > cfg.lambda1 + 0.5 * cfg.lambda2) r.necessary_basic = false;
                abs_sum[k] += std::abs(model.S(k)(ii, jj));
            }
            if (with_sum) {
                const double s = model.n(0) * model.S(0)(ii, jj) + model.n(1) * model.S(1)(ii, jj);
                if (std::abs(s) > 2.0 * cfg.lambda1) r.necessary_sum = false;
            }
        }
    }
    if (r.offblock_count == 0) {
        r.asymptotic_margin = std::numeric_limits<double>::quiet_NaN();
        r.sufficient_fused_pair = with_sum && cfg.q == NormType::L1;
        return r;
    }
    const double tc = static_cast<double>(r.offblock_count);
    double worst = -kInf;
    for (std::size_t k = 0; k < K; ++k) {
        const double avg = model.n(k) * abs_sum[k] / tc;
        worst = std::max(worst, avg - cfg.lambda1);
        if (cfg.q != NormType::L1) {
            const double s = cfg.s();
            const double bound =
                cfg.lambda1 + 0.5 * cfg.lambda2 * std::pow(static_cast<double>(p) / tc, 1.0 / s);
            if (avg > bound) r.necessary_aggregate = false;
        }
    }
    r.asymptotic_margin = worst;
    r.sufficient_fused_pair =
        with_sum && cfg.q == NormType::L1 && r.necessary_basic && r.necessary_sum;
    return r;
}

}  // namespace

ScreenGraph build_screen_graph(const EmpiricalModel& model, double lambda1) {
    if (!(lambda1 >= 0.0)) throw std::invalid_argument("lambda1 must be non-negative");
    const auto p = static_cast<Eigen::Index>(model.p());
    ScreenGraph g{BoolMatrix::Constant(p, p, false)};
    for (Eigen::Index j = 0; j < p; ++j) {
        g.A(j, j) = true;
        for (Eigen::Index i = 0; i < j; ++i) {
            bool edge = false;
            for (std::size_t k = 0; k < model.K() && !edge; ++k)
                edge = model.n(k) * std::abs(model.S(k)(i, j)) > lambda1;
            g.A(i, j) = g.A(j, i) = edge;
        }
    }
    return g;
}

BlockPartition connected_components(const ScreenGraph& graph) {
    const std::size_t p = graph.p();
    if (graph.A.cols() != graph.A.rows())
        throw std::invalid_argument("screen graph must be square");
    UnionFind uf(p);
    for (std::size_t j = 0; j < p; ++j)
        for (std::size_t i = 0; i < j; ++i)
            if (graph.A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) ||
                graph.A(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)))
                uf.unite(i, j);
    // roots are the smallest members, so scanning in index order yields sorted blocks
    BlockPartition out;
    out.p = p;
    std::vector<std::size_t> block_of(p, p);
    for (std::size_t i = 0; i < p; ++i) {
        const std::size_t root = uf.find(i);
        if (block_of[root] == p) {
            block_of[root] = out.blocks.size();
            out.blocks.emplace_back();
        }
        out.blocks[block_of[root]].push_back(i);
    }
    return out;
}

ScreenReport check_necessary_pnjgl(const EmpiricalModel& model, const PenaltyConfig& cfg,
                                   const BlockPartition& partition) {
    if (model.K() != 2) throw std::invalid_argument("PNJGL screening requires exactly 2 classes");
    return evaluate(model, cfg, partition, true);
}

ScreenReport check_necessary_cnjgl(const EmpiricalModel& model, const PenaltyConfig& cfg,
                                   const BlockPartition& partition) {
    return evaluate(model, cfg, partition, false);
}

bool check_sufficient(const EmpiricalModel& model, double lambda1,
                      const BlockPartition& partition) {
    check_partition(model, partition);
    const auto labels = partition.labels();
    const auto p = static_cast<Eigen::Index>(model.p());
    for (Eigen::Index j = 0; j < p; ++j)
        for (Eigen::Index i = 0; i < p; ++i) {
            if (labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)]) continue;
            for (std::size_t k = 0; k < model.K(); ++k)
                if (model.n(k) * std::abs(model.S(k)(i, j)) > lambda1) return false;
        }
    return true;
}

std::vector<std::size_t> DecompositionDiagnostics::block_sizes() const {
    std::vector<std::size_t> out;
    for (const auto& b : partition.blocks) out.push_back(b.size());
    return out;
}

std::size_t thread_limit() {
    if (const char* env = std::getenv("NJGL_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

DecomposedSolution solve_decomposed(Method method, const EmpiricalModel& model,
                                    const PenaltyConfig& cfg, const AdmmOptions& opts) {
    check_method_classes(method, model.K());
    cfg.validate();
    opts.validate();
    const auto t_start = Clock::now();
    DecomposedSolution out;
    auto& diag = out.diagnostics;
    diag.partition = connected_components(build_screen_graph(model, cfg.lambda1));
    diag.screen_seconds = seconds_since(t_start);

    const std::size_t p = model.p();
    const std::size_t K = model.K();
    const std::size_t nb = diag.partition.blocks.size();
    diag.cost_whole = std::pow(static_cast<double>(p), 3);
    for (const auto& b : diag.partition.blocks) diag.cost_blocks += std::pow(double(b.size()), 3);

    if (nb == 1) {
        auto t0 = Clock::now();
        MethodSolution s = solve_method(method, model, cfg, opts);
        diag.blocks.push_back({diag.partition.blocks[0], s.diagnostics, seconds_since(t0), {}});
        diag.status = s.diagnostics.status;
        diag.wall_seconds = seconds_since(t_start);
        out.estimate = std::move(s.estimate);
        return out;
    }

    std::vector<MethodSolution> results(nb);
    diag.blocks.resize(nb);
    // largest blocks first so that the slowest work starts early
    std::vector<std::size_t> order(nb);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return diag.partition.blocks[a].size() > diag.partition.blocks[b].size();
    });
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t slot; (slot = next.fetch_add(1)) < nb;) {
            const std::size_t b = order[slot];
            const auto& members = diag.partition.blocks[b];
            BlockRun& run = diag.blocks[b];
            run.members = members;
            const auto t0 = Clock::now();
            const EmpiricalModel sub = model.restrict_to(members);
            try {
                results[b] = solve_method(method, sub, cfg, opts);
                run.diagnostics = results[b].diagnostics;
            } catch (const std::exception& e) {
                run.error = e.what();
                run.diagnostics.status = SolveStatus::Failed;
                MethodSolution fallback;
                for (std::size_t k = 0; k < K; ++k)
                    fallback.estimate.thetas.push_back(
                        sub.S(k).diagonal().cwiseMax(1e-12).cwiseInverse().asDiagonal());
                results[b] = std::move(fallback);
            }
            run.wall_seconds = seconds_since(t0);
        }
    };
    diag.threads = std::min(thread_limit(), nb);
    if (diag.threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < diag.threads; ++t) pool.emplace_back(worker);
    }

    const auto P = static_cast<Eigen::Index>(p);
    auto scatter = [&](std::vector<Matrix>& dst, std::size_t count, auto pick) {
        dst.assign(count, Matrix::Zero(P, P));
        for (std::size_t b = 0; b < nb; ++b) {
            const auto& members = diag.partition.blocks[b];
            const std::vector<Matrix>& src = pick(results[b]);
            if (src.size() != count) continue;
            for (std::size_t c = 0; c < count; ++c)
                for (std::size_t jj = 0; jj < members.size(); ++jj)
                    for (std::size_t ii = 0; ii < members.size(); ++ii)
                        dst[c](static_cast<Eigen::Index>(members[ii]),
                               static_cast<Eigen::Index>(members[jj])) =
                            src[c](static_cast<Eigen::Index>(ii), static_cast<Eigen::Index>(jj));
        }
    };
    scatter(out.estimate.thetas, K, [](const MethodSolution& s) -> const std::vector<Matrix>& {
        return s.estimate.thetas;
    });
    // V and certificate counts come from the first block that produced them
    std::size_t nv = 0, nd = 0;
    for (const auto& r : results) {
        nv = std::max(nv, r.estimate.v.size());
        nd = std::max(nd, r.estimate.duals.size());
    }
    if (nv > 0)
        scatter(out.estimate.v, nv,
                [](const MethodSolution& s) -> const std::vector<Matrix>& { return s.estimate.v; });
    if (nd > 0)
        scatter(out.estimate.duals, nd, [](const MethodSolution& s) -> const std::vector<Matrix>& {
            return s.estimate.duals;
        });

    for (const auto& run : diag.blocks)
        if (static_cast<int>(run.diagnostics.status) > static_cast<int>(diag.status))
            diag.status = run.diagnostics.status;
    diag.wall_seconds = seconds_since(t_start);
    return out;
}

}  // namespace njgl
