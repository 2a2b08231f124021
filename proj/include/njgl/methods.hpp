#pragma once

#include "njgl/admm.hpp"
#include "njgl/types.hpp"

#include <string>

namespace njgl {

enum class Method { Pnjgl, Cnjgl, Fgl, Ggl, Gl };

/// "pnjgl", "cnjgl", "fgl", "ggl", "gl"; throws std::invalid_argument otherwise.
Method parse_method(const std::string& text);
std::string to_string(Method m);

/// Throws std::invalid_argument when the method cannot handle K classes
/// (PNJGL and FGL need K = 2, GGL needs K >= 2).
void check_method_classes(Method m, std::size_t K);

struct MethodSolution {
    PrecisionSet estimate;
    AdmmDiagnostics diagnostics;
};

/// Runs one estimator on the full model. FGL ignores cfg.q; GL ignores lambda2.
MethodSolution solve_method(Method m, const EmpiricalModel& model, const PenaltyConfig& cfg,
                            const AdmmOptions& opts = {});

/// The method's objective at an estimate. RCON terms are evaluated at the feasible
/// decomposition built from the estimate's V (see feasible_decomposition). Throws
/// std::domain_error when an estimate is not positive definite.
double method_objective(Method m, const EmpiricalModel& model, const PenaltyConfig& cfg,
                        const PrecisionSet& estimate);

}  // namespace njgl
