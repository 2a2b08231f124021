#pragma once

#include "njgl/admm.hpp"
#include "njgl/pnjgl.hpp"
#include "njgl/types.hpp"

namespace njgl {

struct GlSolution {
    Matrix theta;
    AdmmDiagnostics diagnostics;
};

struct BaselineSolution {
    PrecisionSet estimate;
    AdmmDiagnostics diagnostics;
};

/// Graphical lasso: min n(-log det Theta + tr(S Theta)) + lambda ||Theta||_1.
GlSolution solve_gl(const Matrix& S, double n, double lambda1, const AdmmOptions& opts = {});

/// Graphical lasso with separate weights on the diagonal and the off-diagonal entries.
GlSolution solve_gl(const Matrix& S, double n, double lambda_diag, double lambda_offdiag,
                    const AdmmOptions& opts);

/// Independent graphical lasso per class. Diagnostics: worst status, summed iteration
/// counts, summed objective.
BaselineSolution solve_gl_classes(const EmpiricalModel& model, double lambda1,
                                  const AdmmOptions& opts = {});

/// Fused graphical lasso, solved as PNJGL with q = 1.
PnjglSolution solve_fgl(const EmpiricalModel& model, double lambda1, double lambda2,
                        const AdmmOptions& opts = {});

/// Group graphical lasso (K >= 2); the group term covers off-diagonal entries only.
BaselineSolution solve_ggl(const EmpiricalModel& model, double lambda1, double lambda2,
                           const AdmmOptions& opts = {});

}  // namespace njgl
