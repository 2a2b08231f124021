#pragma once

#include "njgl/admm.hpp"
#include "njgl/methods.hpp"
#include "njgl/types.hpp"

#include <string>

namespace njgl {

using BoolMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// A_ij = true iff i == j or n_k |S^k_ij| > lambda1 for some k.
struct ScreenGraph {
    BoolMatrix A;
    std::size_t p() const { return static_cast<std::size_t>(A.rows()); }
};

struct ScreenReport {
    BlockPartition partition;
    std::size_t offblock_count = 0;  ///< |T^c|, ordered pairs
    bool sufficient_holds = false;   ///< n_k |S^k_ij| <= lambda1 on T^c
    bool necessary_basic = true;     ///< n_k |S^k_ij| <= lambda1 + lambda2/2 on T^c
    bool necessary_sum = true;       ///< |n1 S^1_ij + n2 S^2_ij| <= 2 lambda1 (two-class PNJGL)
    bool necessary_aggregate = true; ///< averaged bound, q > 1 only
    /// q = 1, K = 2 PNJGL: the basic and sum conditions together are also sufficient.
    bool sufficient_fused_pair = false;
    /// max_k (n_k/|T^c|) sum_{T^c} |S^k_ij| - lambda1: the large-p form of the aggregate
    /// bound. Informational only; NaN when T^c is empty.
    double asymptotic_margin = 0.0;
};

ScreenGraph build_screen_graph(const EmpiricalModel& model, double lambda1);

/// Maximal connected components; blocks ordered by smallest member, members ascending.
BlockPartition connected_components(const ScreenGraph& graph);

/// Necessary conditions for a two-class PNJGL solution supported on the partition.
ScreenReport check_necessary_pnjgl(const EmpiricalModel& model, const PenaltyConfig& cfg,
                                   const BlockPartition& partition);

/// Necessary conditions for CNJGL (there is no sum condition for this problem).
ScreenReport check_necessary_cnjgl(const EmpiricalModel& model, const PenaltyConfig& cfg,
                                   const BlockPartition& partition);

/// n_k |S^k_ij| <= lambda1 for every (i, j) outside the blocks and every class.
bool check_sufficient(const EmpiricalModel& model, double lambda1, const BlockPartition& partition);

struct BlockRun {
    std::vector<std::size_t> members;
    AdmmDiagnostics diagnostics;
    double wall_seconds = 0.0;
    std::string error;  ///< non-empty when the sub-solver threw
};

struct DecompositionDiagnostics {
    BlockPartition partition;
    std::vector<BlockRun> blocks;
    SolveStatus status = SolveStatus::Converged;  ///< worst over blocks
    double wall_seconds = 0.0;
    double screen_seconds = 0.0;
    /// per-iteration cost model: sum over blocks of |block|^3 against p^3
    double cost_blocks = 0.0;
    double cost_whole = 0.0;
    std::size_t threads = 1;

    std::vector<std::size_t> block_sizes() const;
    double cost_ratio() const { return cost_whole > 0.0 ? cost_blocks / cost_whole : 1.0; }
};

struct DecomposedSolution {
    PrecisionSet estimate;
    DecompositionDiagnostics diagnostics;
};

/// Worker count for internal parallelism: NJGL_THREADS when set to a positive integer,
/// otherwise std::thread::hardware_concurrency() (at least 1).
std::size_t thread_limit();

/// Screens at cfg.lambda1, solves every block on its principal submatrices and reassembles
/// block-diagonal estimates with zeros between blocks. Blocks run concurrently; the result
/// does not depend on completion order. A block whose solver throws is filled with
/// diag(1 / S_ii) per class and recorded as failed.
DecomposedSolution solve_decomposed(Method method, const EmpiricalModel& model,
                                    const PenaltyConfig& cfg, const AdmmOptions& opts = {});

}  // namespace njgl
