#include "njgl/methods.hpp"

#include "njgl/baselines.hpp"
#include "njgl/cnjgl.hpp"
#include "njgl/likelihood.hpp"
#include "njgl/pnjgl.hpp"

#include <stdexcept>

namespace njgl {

Method parse_method(const std::string& text) {
    if (text == "pnjgl") return Method::Pnjgl;
    if (text == "cnjgl") return Method::Cnjgl;
    if (text == "fgl") return Method::Fgl;
    if (text == "ggl") return Method::Ggl;
    if (text == "gl") return Method::Gl;
    throw std::invalid_argument("unknown method '" + text + "' (expected pnjgl|cnjgl|fgl|ggl|gl)");
}

std::string to_string(Method m) {
    switch (m) {
        case Method::Pnjgl: return "pnjgl";
        case Method::Cnjgl: return "cnjgl";
        case Method::Fgl: return "fgl";
        case Method::Ggl: return "ggl";
        case Method::Gl: return "gl";
    }
    return "unknown";
}

void check_method_classes(Method m, std::size_t K) {
    if ((m == Method::Pnjgl || m == Method::Fgl) && K != 2)
        throw std::invalid_argument(to_string(m) + " requires exactly 2 classes, got " +
                                    std::to_string(K));
    if (m == Method::Ggl && K < 2)
        throw std::invalid_argument("ggl requires at least 2 classes, got " + std::to_string(K));
    if (K < 1) throw std::invalid_argument("at least one class is required");
}

MethodSolution solve_method(Method m, const EmpiricalModel& model, const PenaltyConfig& cfg,
                            const AdmmOptions& opts) {
    check_method_classes(m, model.K());
    cfg.validate();
    switch (m) {
        case Method::Pnjgl: {
            auto s = solve_pnjgl(model, cfg, opts);
            return {std::move(s.estimate), s.diagnostics};
        }
        case Method::Fgl: {
            auto s = solve_fgl(model, cfg.lambda1, cfg.lambda2, opts);
            return {std::move(s.estimate), s.diagnostics};
        }
        case Method::Cnjgl: {
            auto s = solve_cnjgl(model, cfg, opts);
            return {std::move(s.estimate), s.diagnostics};
        }
        case Method::Ggl: {
            auto s = solve_ggl(model, cfg.lambda1, cfg.lambda2, opts);
            return {std::move(s.estimate), s.diagnostics};
        }
        case Method::Gl: {
            auto s = solve_gl_classes(model, cfg.lambda1, opts);
            return {std::move(s.estimate), s.diagnostics};
        }
    }
    throw std::logic_error("solve_method: unhandled method");
}

double method_objective(Method m, const EmpiricalModel& model, const PenaltyConfig& cfg,
                        const PrecisionSet& estimate) {
    check_method_classes(m, model.K());
    const auto& t = estimate.thetas;
    if (t.size() != model.K()) throw std::invalid_argument("method_objective: wrong class count");
    switch (m) {
        case Method::Pnjgl: {
            const Matrix diff = t[0] - t[1];
            const Matrix v = estimate.v.empty() ? Matrix(0.5 * diff)
                                                : feasible_decomposition(diff, estimate.v[0], cfg.q);
            return pnjgl_objective(model, t[0], t[1], v, cfg);
        }
        case Method::Cnjgl: {
            std::vector<Matrix> vs;
            for (std::size_t k = 0; k < t.size(); ++k) {
                const Matrix off = offdiag(t[k]);
                vs.push_back(k < estimate.v.size() ? feasible_decomposition(off, estimate.v[k], cfg.q)
                                                   : Matrix(0.5 * off));
            }
            return cnjgl_objective(model, t, vs, cfg);
        }
        case Method::Fgl: return fgl_objective(model, t, cfg.lambda1, cfg.lambda2);
        case Method::Ggl: return ggl_objective(model, t, cfg.lambda1, cfg.lambda2);
        case Method::Gl: {
            double total = 0.0;
            for (std::size_t k = 0; k < t.size(); ++k)
                total += gl_objective(model.S(k), model.n(k), t[k], cfg.lambda1, cfg.lambda1);
            return total;
        }
    }
    throw std::logic_error("method_objective: unhandled method");
}

}  // namespace njgl
