#include "fixtures.hpp"
#include "oracles.hpp"

#include "njgl/baselines.hpp"
#include "njgl/likelihood.hpp"
#include "njgl/pnjgl.hpp"

#include <doctest.h>

#include <cmath>

using namespace njgl;

namespace {

double column_penalty(const Matrix& V, NormType q) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < V.cols(); ++j) {
        const auto c = V.col(j);
        acc += q == NormType::L1 ? c.cwiseAbs().sum()
             : q == NormType::L2 ? c.norm()
                                 : c.cwiseAbs().maxCoeff();
    }
    return acc;
}

double inner(const Matrix& A, const Matrix& B) { return A.cwiseProduct(B).sum(); }

/// Augmented Lagrangian of the perturbed-node splitting, evaluated with hand-rolled
/// determinants.
double augmented_lagrangian(const PnjglState& s, const EmpiricalModel& m, const PenaltyConfig& c,
                            double rho) {
    const Matrix r1 = s.theta1 - s.theta2 - (s.v + s.w);
    const Matrix r2 = s.v - s.w.transpose();
    const Matrix r3 = s.theta1 - s.z1, r4 = s.theta2 - s.z2;
    return m.n(0) * (-oracle::logdet_spd(s.theta1) + inner(m.S(0), s.theta1)) +
           m.n(1) * (-oracle::logdet_spd(s.theta2) + inner(m.S(1), s.theta2)) +
           c.lambda1 * (s.z1.cwiseAbs().sum() + s.z2.cwiseAbs().sum()) +
           c.lambda2 * column_penalty(s.v, c.q) + inner(s.f, r1) + inner(s.g, r2) +
           inner(s.q1, r3) + inner(s.q2, r4) +
           0.5 * rho * (r1.squaredNorm() + r2.squaredNorm() + r3.squaredNorm() + r4.squaredNorm());
}

PnjglState random_state(Eigen::Index p, std::mt19937_64& gen) {
    PnjglState s;
    s.theta1 = fixture::spd(p, gen);
    s.theta2 = fixture::spd(p, gen);
    s.z1 = fixture::symmetric(p, gen);
    s.z2 = fixture::symmetric(p, gen);
    s.v = fixture::gaussian(p, p, gen);
    s.w = fixture::gaussian(p, p, gen);
    s.f = fixture::gaussian(p, p, gen);
    s.g = fixture::gaussian(p, p, gen);
    s.q1 = fixture::symmetric(p, gen);
    s.q2 = fixture::symmetric(p, gen);
    return s;
}

/// An exact stationary point for q = 1: every Theta entry nonzero, V = (Theta1 - Theta2)/2,
/// and covariances chosen so that the Theta blocks are stationary too.
struct FixedPoint {
    PnjglState state;
    EmpiricalModel model;
    PenaltyConfig cfg;
};

FixedPoint exact_fixed_point(Eigen::Index p, std::mt19937_64& gen) {
    const PenaltyConfig cfg{0.3, 0.5, NormType::L1};
    const double n = 200.0;
    PnjglState s;
    s.theta1 = fixture::spd(p, gen);
    s.theta2 = fixture::spd(p, gen);
    auto sign = [](const Matrix& M) {
        return Matrix(M.unaryExpr([](double a) { return a > 0 ? 1.0 : -1.0; }));
    };
    s.z1 = s.theta1;
    s.z2 = s.theta2;
    s.v = 0.5 * (s.theta1 - s.theta2);
    s.w = s.v.transpose();
    s.f = 0.5 * cfg.lambda2 * sign(s.v);
    s.g = -s.f.transpose();
    s.q1 = cfg.lambda1 * sign(s.theta1);
    s.q2 = cfg.lambda1 * sign(s.theta2);
    const Matrix S1 = oracle::inverse(s.theta1) - (s.f + s.q1) / n;
    const Matrix S2 = oracle::inverse(s.theta2) - (s.q2 - s.f) / n;
    return {s, EmpiricalModel({{symmetrize(S1), n}, {symmetrize(S2), n}}), cfg};
}

double state_distance(const PnjglState& a, const PnjglState& b) {
    double d = 0.0;
    d = std::max(d, (a.theta1 - b.theta1).norm());
    d = std::max(d, (a.theta2 - b.theta2).norm());
    d = std::max(d, (a.z1 - b.z1).norm());
    d = std::max(d, (a.z2 - b.z2).norm());
    d = std::max(d, (a.v - b.v).norm());
    d = std::max(d, (a.w - b.w).norm());
    d = std::max(d, (a.f - b.f).norm());
    d = std::max(d, (a.g - b.g).norm());
    d = std::max(d, (a.q1 - b.q1).norm());
    d = std::max(d, (a.q2 - b.q2).norm());
    return d;
}

}  // namespace

TEST_SUITE("solver_pnjgl") {

TEST_CASE("admm options validation") {
    CHECK_NOTHROW(AdmmOptions{}.validate());
    AdmmOptions o;
    o.mu = 1.0;
    CHECK_THROWS_AS(o.validate(), std::invalid_argument);
    o = {};
    o.rho0 = 0;
    CHECK_THROWS_AS(o.validate(), std::invalid_argument);
    o = {};
    o.eps = 0;
    CHECK_THROWS_AS(o.validate(), std::invalid_argument);
    o = {};
    o.t_max = 0;
    CHECK_THROWS_AS(o.validate(), std::invalid_argument);
    const AdmmOptions t = AdmmOptions{}.tightened(1e-8, 10);
    CHECK(t.eps == 1e-8);
    CHECK(t.t_max == 10000);
    CHECK(t.inner_cap == 100000);
}

TEST_CASE("unpenalized identity covariance gives the identity") {
    const EmpiricalModel m({{Matrix::Identity(5, 5), 20}, {Matrix::Identity(5, 5), 20}});
    const auto sol = solve_pnjgl(m, PenaltyConfig{0, 0, NormType::L2});
    CHECK(sol.diagnostics.converged());
    for (const auto& t : sol.estimate.thetas) CHECK((t - Matrix::Identity(5, 5)).norm() <= 1e-4);
}

TEST_CASE("lambda2 = 0 decouples into two graphical lasso problems") {
    std::mt19937_64 gen(51);
    for (NormType q : {NormType::L1, NormType::L2, NormType::LInf}) {
        const EmpiricalModel m = fixture::random_model(8, 2, 40, gen);
        const auto sol = solve_pnjgl(m, PenaltyConfig{6.0, 0.0, q});
        REQUIRE(sol.diagnostics.converged());
        for (std::size_t k = 0; k < 2; ++k) {
            const auto gl = solve_gl(m.S(k), m.n(k), 6.0);
            CHECK(fixture::rel_diff(sol.estimate.thetas[k], gl.theta) <= 1e-3);
        }
    }
}

TEST_CASE("q = 1 objective equals the fused graphical lasso objective") {
    std::mt19937_64 gen(52);
    const EmpiricalModel m = fixture::random_model(10, 2, 30, gen);
    const PenaltyConfig cfg{3.0, 8.0, NormType::L1};
    const auto sol = solve_pnjgl(m, cfg);
    REQUIRE(sol.diagnostics.converged());
    CHECK(sol.diagnostics.objective ==
          doctest::Approx(fgl_objective(m, sol.estimate.thetas, 3.0, 8.0)).epsilon(1e-8));
}

TEST_CASE("each primal update minimizes the augmented Lagrangian over its block") {
    std::mt19937_64 gen(53);
    for (NormType q : {NormType::L1, NormType::L2, NormType::LInf})
        for (int rep = 0; rep < 3; ++rep) {
            const EmpiricalModel m = fixture::random_model(4, 2, 15, gen);
            const PenaltyConfig cfg{0.7, 1.9, q};
            const double rho = 2.5;
            const PnjglState old = random_state(4, gen);
            const PnjglState nw = step_pnjgl(old, m, cfg, rho);

            // Reconstruct the sweep order: each block sees newer values of the blocks
            // updated before it and older values of the rest.
            auto check_block = [&](auto set, const Matrix& at, PnjglState base, bool sym) {
                auto f = [&](const Matrix& X) {
                    PnjglState s = base;
                    set(s, X);
                    return augmented_lagrangian(s, m, cfg, rho);
                };
                CHECK(oracle::worst_descent(f, at, gen, 60, sym) <= 1e-10);
            };
            PnjglState b = old;
            check_block([](PnjglState& s, const Matrix& X) { s.theta1 = X; }, nw.theta1, b, true);
            b.theta1 = nw.theta1;
            check_block([](PnjglState& s, const Matrix& X) { s.theta2 = X; }, nw.theta2, b, true);
            b.theta2 = nw.theta2;
            check_block([](PnjglState& s, const Matrix& X) { s.z1 = X; }, nw.z1, b, false);
            check_block([](PnjglState& s, const Matrix& X) { s.z2 = X; }, nw.z2, b, false);
            b.z1 = nw.z1;
            b.z2 = nw.z2;
            check_block([](PnjglState& s, const Matrix& X) { s.v = X; }, nw.v, b, false);
            b.v = nw.v;
            check_block([](PnjglState& s, const Matrix& X) { s.w = X; }, nw.w, b, false);
        }
}

TEST_CASE("dual updates are plain ascent steps") {
    std::mt19937_64 gen(54);
    const EmpiricalModel m = fixture::random_model(5, 2, 20, gen);
    const PenaltyConfig cfg{0.5, 1.0, NormType::L2};
    const double rho = 3.0;
    const PnjglState old = random_state(5, gen);
    const PnjglState s = step_pnjgl(old, m, cfg, rho);
    CHECK((s.f - (old.f + rho * (s.theta1 - s.theta2 - (s.v + s.w)))).norm() <= 1e-10);
    CHECK((s.g - (old.g + rho * (s.v - s.w.transpose()))).norm() <= 1e-10);
    CHECK((s.q1 - (old.q1 + rho * (s.theta1 - s.z1))).norm() <= 1e-10);
    CHECK((s.q2 - (old.q2 + rho * (s.theta2 - s.z2))).norm() <= 1e-10);
}

TEST_CASE("exact stationary points are fixed points of a sweep") {
    std::mt19937_64 gen(55);
    for (int rep = 0; rep < 5; ++rep) {
        const FixedPoint fp = exact_fixed_point(5, gen);
        for (double rho : {0.5, 4.0, 100.0}) {
            const PnjglState s = step_pnjgl(fp.state, fp.model, fp.cfg, rho);
            CHECK(state_distance(s, fp.state) <= 1e-10);
        }
    }
    // trivial case: identity covariance, no penalty
    const EmpiricalModel m({{Matrix::Identity(4, 4), 9}, {Matrix::Identity(4, 4), 9}});
    PnjglState s = PnjglState::identity(4);
    s.v.setZero();
    s.w.setZero();
    const PnjglState t = step_pnjgl(s, m, PenaltyConfig{0, 0, NormType::L2}, 1.7);
    CHECK(state_distance(s, t) <= 1e-10);
}

TEST_CASE("iterates stay positive definite") {
    std::mt19937_64 gen(56);
    const EmpiricalModel m = fixture::random_model(6, 2, 10, gen);
    PnjglState s = PnjglState::identity(6);
    for (int it = 0; it < 50; ++it) {
        s = step_pnjgl(s, m, PenaltyConfig{1.0, 2.0, NormType::L2}, 0.5 * (it + 1));
        CHECK(oracle::is_spd(s.theta1));
        CHECK(oracle::is_spd(s.theta2));
    }
}

TEST_CASE("coupling residuals are small on tight runs") {
    std::mt19937_64 gen(57);
    AdmmOptions o;
    o.eps = 1e-6;
    for (NormType q : {NormType::L2, NormType::LInf}) {
        const EmpiricalModel m = fixture::random_model(8, 2, 25, gen);
        const auto sol = solve_pnjgl(m, PenaltyConfig{2.0, 6.0, q}, o);
        REQUIRE(sol.diagnostics.converged());
        const double bound = 1e-3 * std::max(1.0, sol.estimate.thetas[0].norm());
        for (const auto& [name, r] : sol.diagnostics.residuals) {
            INFO(name);
            CHECK(r <= bound);
        }
        // estimates are exactly symmetric and positive definite
        for (const auto& t : sol.estimate.thetas) {
            CHECK(t == t.transpose());
            CHECK(oracle::is_spd(t));
        }
        // reported decomposition reproduces the difference within the residual
        const Matrix D = sol.estimate.thetas[0] - sol.estimate.thetas[1];
        const Matrix V = sol.estimate.v[0];
        double bound_abs = 0.0;
        for (const auto& [name, r] : sol.diagnostics.residuals)
            bound_abs += name.rfind("theta", 0) == 0 && name.find("-z") != std::string::npos
                             ? 2.0 * r : r;
        CHECK((D - V - V.transpose()).norm() <= bound_abs + 1e-12);
    }
}

TEST_CASE("penalty schedule is geometric and capped") {
    std::mt19937_64 gen(58);
    const EmpiricalModel m = fixture::random_model(6, 2, 20, gen);
    AdmmOptions o;
    o.t_max = 4;
    o.inner_cap = 3;
    const auto sol = solve_pnjgl(m, PenaltyConfig{1.0, 1.0, NormType::L2}, o);
    CHECK(sol.diagnostics.outer_iterations == 4);
    CHECK(sol.diagnostics.final_rho == doctest::Approx(0.5 * std::pow(5.0, 4)));
    o.rho_max = 10.0;
    const auto capped = solve_pnjgl(m, PenaltyConfig{1.0, 1.0, NormType::L2}, o);
    CHECK(capped.diagnostics.final_rho == 10.0);
}

TEST_CASE("budget exhaustion is reported, not hidden") {
    std::mt19937_64 gen(59);
    const EmpiricalModel m = fixture::random_model(6, 2, 20, gen);
    AdmmOptions o;
    o.t_max = 1;
    o.inner_cap = 2;
    const auto sol = solve_pnjgl(m, PenaltyConfig{1.0, 1.0, NormType::L2}, o);
    CHECK_FALSE(sol.diagnostics.converged());
    CHECK(sol.diagnostics.total_iterations == 2);
    CHECK(sol.estimate.thetas.size() == 2);
    CHECK(sol.diagnostics.residuals.size() == 4);
}

TEST_CASE("warm start from a solution finishes quickly") {
    std::mt19937_64 gen(60);
    const EmpiricalModel m = fixture::random_model(7, 2, 30, gen);
    const PenaltyConfig cfg{2.0, 5.0, NormType::L2};
    const auto cold = solve_pnjgl(m, cfg);
    REQUIRE(cold.diagnostics.converged());
    const auto warm = solve_pnjgl(m, cfg, {}, cold.state);
    CHECK(warm.diagnostics.converged());
    CHECK(warm.diagnostics.total_iterations < cold.diagnostics.total_iterations);
    CHECK(fixture::rel_diff(warm.estimate.thetas[0], cold.estimate.thetas[0]) <= 1e-3);
}

TEST_CASE("input checks") {
    std::mt19937_64 gen(61);
    const EmpiricalModel three = fixture::random_model(4, 3, 10, gen);
    CHECK_THROWS_AS(solve_pnjgl(three, PenaltyConfig{1, 1, NormType::L2}), std::invalid_argument);
    const EmpiricalModel two = fixture::random_model(4, 2, 10, gen);
    CHECK_THROWS_AS(solve_pnjgl(two, PenaltyConfig{-1, 1, NormType::L2}), std::invalid_argument);
    CHECK_THROWS_AS(step_pnjgl(PnjglState::identity(4), two, PenaltyConfig{1, 1, NormType::L2}, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(solve_pnjgl(two, PenaltyConfig{1, 1, NormType::L2}, {}, PnjglState::identity(3)),
                    std::invalid_argument);
}

TEST_CASE("feasible decomposition") {
    std::mt19937_64 gen(62);
    const Matrix D = fixture::symmetric(5, gen);
    const Matrix V = fixture::gaussian(5, 5, gen);
    for (NormType q : {NormType::L1, NormType::L2, NormType::LInf}) {
        const Matrix F = feasible_decomposition(D, V, q);
        CHECK((F + F.transpose() - D).norm() <= 1e-14);
    }
}

}  // TEST_SUITE
