#include "fixtures.hpp"
#include "oracles.hpp"

#include "njgl/baselines.hpp"
#include "njgl/cnjgl.hpp"
#include "njgl/likelihood.hpp"
#include "njgl/methods.hpp"

#include <doctest.h>

#include <cmath>

using namespace njgl;

namespace {

bool bitwise_equal(const Matrix& a, const Matrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           std::equal(a.data(), a.data() + a.size(), b.data());
}

}  // namespace

TEST_SUITE("solver_baselines") {

TEST_CASE("graphical lasso at identity covariance without penalty") {
    const auto sol = solve_gl(Matrix::Identity(5, 5), 12, 0.0);
    CHECK(sol.diagnostics.converged());
    CHECK((sol.theta - Matrix::Identity(5, 5)).norm() <= 1e-4);
}

TEST_CASE("graphical lasso is diagonal above the singleton-block threshold") {
    std::mt19937_64 gen(81);
    for (int rep = 0; rep < 5; ++rep) {
        const Matrix S = fixture::sample_cov(6, 20, gen);
        const double lam = 20 * fixture::max_offdiag_abs(S);
        const auto sol = solve_gl(S, 20, lam);
        REQUIRE(sol.diagnostics.converged());
        CHECK(fixture::max_offdiag_abs(sol.theta) == 0.0);
        // diagonal optimum: n(S_ii - 1/theta_ii) + lam = 0
        for (Eigen::Index i = 0; i < 6; ++i)
            CHECK(sol.theta(i, i) == doctest::Approx(1.0 / (S(i, i) + lam / 20)).epsilon(1e-3));
    }
}

TEST_CASE("graphical lasso satisfies its optimality conditions") {
    std::mt19937_64 gen(82);
    for (int rep = 0; rep < 10; ++rep) {
        const Matrix S = fixture::spd(4, gen);
        const auto sol = solve_gl(S, 15, 2.0);
        REQUIRE(sol.diagnostics.converged());
        CHECK(oracle::gl_kkt_residual(S, 15, sol.theta, 2.0, 2.0) <= 1e-3);
        const auto w = solve_gl(S, 15, 0.5, 3.0, AdmmOptions{});
        CHECK(oracle::gl_kkt_residual(S, 15, w.theta, 0.5, 3.0) <= 1e-3);
    }
}

TEST_CASE("fused graphical lasso is the q = 1 perturbed-node problem") {
    std::mt19937_64 gen(83);
    const EmpiricalModel m = fixture::random_model(8, 2, 30, gen);
    const auto a = solve_fgl(m, 2.0, 5.0);
    const auto b = solve_pnjgl(m, PenaltyConfig{2.0, 5.0, NormType::L1});
    for (std::size_t k = 0; k < 2; ++k)
        CHECK(bitwise_equal(a.estimate.thetas[k], b.estimate.thetas[k]));
    CHECK(a.diagnostics.total_iterations == b.diagnostics.total_iterations);
}

TEST_CASE("fused graphical lasso with lambda2 = 0 decouples") {
    std::mt19937_64 gen(84);
    const EmpiricalModel m = fixture::random_model(8, 2, 30, gen);
    const auto sol = solve_fgl(m, 4.0, 0.0);
    for (std::size_t k = 0; k < 2; ++k)
        CHECK(fixture::rel_diff(sol.estimate.thetas[k], solve_gl(m.S(k), 30, 4.0).theta) <= 1e-3);
}

TEST_CASE("fused graphical lasso fuses under a large lambda2") {
    std::mt19937_64 gen(85);
    for (int rep = 0; rep < 3; ++rep) {
        const EmpiricalModel m = fixture::random_model(8, 2, 30, gen);
        const auto sol = solve_fgl(m, 2.0, 400.0, AdmmOptions{}.tightened(1e-8, 10));
        REQUIRE(sol.diagnostics.converged());
        CHECK((sol.estimate.thetas[0] - sol.estimate.thetas[1]).norm() <= 1e-4);
        // fused problem equals one graphical lasso on the pooled covariance with weight 2 lambda1
        const Matrix pooled = (30 * m.S(0) + 30 * m.S(1)) / 60.0;
        const auto gl = solve_gl(pooled, 60, 4.0, AdmmOptions{}.tightened(1e-8, 10));
        CHECK(fixture::rel_diff(sol.estimate.thetas[0], gl.theta) <= 1e-3);
    }
}

TEST_CASE("group graphical lasso with lambda2 = 0 decouples") {
    std::mt19937_64 gen(86);
    const EmpiricalModel m = fixture::random_model(8, 3, 30, gen);
    const auto sol = solve_ggl(m, 4.0, 0.0);
    REQUIRE(sol.diagnostics.converged());
    for (std::size_t k = 0; k < 3; ++k)
        CHECK(fixture::rel_diff(sol.estimate.thetas[k], solve_gl(m.S(k), 30, 4.0).theta) <= 1e-3);
}

TEST_CASE("group graphical lasso with a large group weight is diagonal") {
    std::mt19937_64 gen(87);
    const EmpiricalModel m = fixture::random_model(8, 2, 30, gen);
    // at a diagonal point the off-diagonal gradient is n_k S^k_ij; the group prox keeps it
    // at zero once every pair norm is below lambda2
    double bound = 0.0;
    for (Eigen::Index j = 0; j < 8; ++j)
        for (Eigen::Index i = 0; i < 8; ++i)
            if (i != j) bound = std::max(bound, std::hypot(30 * m.S(0)(i, j), 30 * m.S(1)(i, j)));
    const auto sol = solve_ggl(m, 0.0, 1.5 * bound);
    REQUIRE(sol.diagnostics.converged());
    for (const auto& t : sol.estimate.thetas) CHECK(fixture::max_offdiag_abs(t) <= 1e-6);
    const auto below = solve_ggl(m, 0.0, 0.5 * bound);
    CHECK(fixture::max_offdiag_abs(below.estimate.thetas[0]) > 1e-6);
}

TEST_CASE("group graphical lasso beats the graphical lasso pair on its own objective") {
    std::mt19937_64 gen(88);
    for (int rep = 0; rep < 10; ++rep) {
        const EmpiricalModel m = fixture::random_model(4, 2, 20, gen);
        const auto ggl = solve_ggl(m, 1.0, 3.0);
        const auto gl = solve_gl_classes(m, 1.0);
        const double own = ggl_objective(m, ggl.estimate.thetas, 1.0, 3.0);
        const double other = ggl_objective(m, gl.estimate.thetas, 1.0, 3.0);
        CHECK(own <= other + 1e-6 * std::abs(other));
        CHECK(ggl.diagnostics.objective == doctest::Approx(own));
    }
}

TEST_CASE("graphical lasso matches the joint solvers with lambda2 = 0") {
    std::mt19937_64 gen(89);
    const EmpiricalModel m = fixture::random_model(9, 2, 40, gen);
    const auto gl = solve_gl_classes(m, 5.0);
    const auto pn = solve_pnjgl(m, PenaltyConfig{5.0, 0.0, NormType::L2});
    const auto cn = solve_cnjgl(m, PenaltyConfig{5.0, 0.0, NormType::LInf});
    for (std::size_t k = 0; k < 2; ++k) {
        CHECK(fixture::rel_diff(pn.estimate.thetas[k], gl.estimate.thetas[k]) <= 1e-3);
        CHECK(fixture::rel_diff(cn.estimate.thetas[k], gl.estimate.thetas[k]) <= 1e-3);
    }
    CHECK(gl.diagnostics.residuals.size() == 2);
    CHECK(gl.diagnostics.residuals[1].first == "class2:theta1-z1");
}

TEST_CASE("baseline outputs are symmetric and positive definite") {
    std::mt19937_64 gen(90);
    const EmpiricalModel m = fixture::random_model(7, 2, 15, gen);
    std::vector<std::vector<Matrix>> outs{solve_gl_classes(m, 1.0).estimate.thetas,
                                          solve_fgl(m, 1.0, 2.0).estimate.thetas,
                                          solve_ggl(m, 1.0, 2.0).estimate.thetas};
    for (const auto& set : outs)
        for (const auto& t : set) {
            CHECK((t - t.transpose()).norm() <= 1e-8);
            CHECK(oracle::is_spd(t));
        }
}

TEST_CASE("method dispatch") {
    CHECK(parse_method("pnjgl") == Method::Pnjgl);
    CHECK(parse_method("gl") == Method::Gl);
    CHECK(to_string(Method::Ggl) == "ggl");
    CHECK_THROWS_AS(parse_method("lasso"), std::invalid_argument);
    CHECK_THROWS_AS(check_method_classes(Method::Pnjgl, 3), std::invalid_argument);
    CHECK_THROWS_AS(check_method_classes(Method::Fgl, 1), std::invalid_argument);
    CHECK_THROWS_AS(check_method_classes(Method::Ggl, 1), std::invalid_argument);
    CHECK_NOTHROW(check_method_classes(Method::Cnjgl, 1));
    CHECK_NOTHROW(check_method_classes(Method::Gl, 5));

    std::mt19937_64 gen(91);
    const EmpiricalModel m = fixture::random_model(5, 2, 20, gen);
    const PenaltyConfig cfg{1.0, 2.0, NormType::L2};
    for (Method meth : {Method::Pnjgl, Method::Cnjgl, Method::Fgl, Method::Ggl, Method::Gl}) {
        const auto s = solve_method(meth, m, cfg);
        CHECK(s.estimate.thetas.size() == 2);
        CHECK(method_objective(meth, m, cfg, s.estimate) ==
              doctest::Approx(s.diagnostics.objective).epsilon(1e-10));
    }
    CHECK_THROWS_AS(solve_ggl(EmpiricalModel({{Matrix::Identity(3, 3), 5}}), 1, 1),
                    std::invalid_argument);
}

}  // TEST_SUITE
