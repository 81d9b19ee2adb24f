#include <doctest.h>

#include <Eigen/Dense>
#include <chrono>
#include <cmath>

#include "oracles/lasso_ista.hpp"
#include "surrokit/rng.hpp"
#include "surrokit/solvers.hpp"

using namespace surrokit;

namespace {

SolverConfig raw_config(double lambda) {
    SolverConfig cfg;
    cfg.lambda = lambda;
    cfg.standardize = false;
    cfg.fit_intercept = false;
    cfg.tol = 1e-12;
    cfg.max_iter = 20000;
    return cfg;
}

Eigen::MatrixXd random_matrix(Eigen::Index m, Eigen::Index n,
                              RandomStream& stream) {
    Eigen::MatrixXd A(m, n);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < n; ++j) A(i, j) = stream.normal();
    return A;
}

Eigen::VectorXd random_vector(Eigen::Index n, RandomStream& stream) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = stream.normal();
    return v;
}

} // namespace

TEST_SUITE("solvers") {

TEST_CASE("unregularized lasso on the identity interpolates") {
    const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(5, 5);
    Eigen::VectorXd y(5);
    y << 3.0, -1.5, 0.25, 7.0, -2.0;
    const FitResult fit = solve_lasso(A, y, raw_config(0.0));
    CHECK(fit.converged);
    CHECK((fit.coefficients - y).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(fit.intercept == 0.0);
}

TEST_CASE("lambda above the subgradient threshold kills every coefficient") {
    RandomStream stream(101);
    const Eigen::MatrixXd A = random_matrix(12, 20, stream);
    const Eigen::VectorXd y = random_vector(12, stream);
    const double lambda_max = lasso_lambda_max(A, y, raw_config(0.0));

    const FitResult at = solve_lasso(A, y, raw_config(lambda_max));
    CHECK(at.nnz == 0);
    const FitResult above = solve_lasso(A, y, raw_config(1.5 * lambda_max));
    CHECK(above.nnz == 0);
    // Just below the threshold at least one coefficient survives.
    const FitResult below = solve_lasso(A, y, raw_config(0.99 * lambda_max));
    CHECK(below.nnz >= 1);
}

TEST_CASE("coordinate descent matches the proximal-gradient oracle") {
    const auto start = std::chrono::steady_clock::now();
    RandomStream stream(202);
    int instance = 0;
    for (int rep = 0; rep < 50; ++rep) {
        const Eigen::MatrixXd A = random_matrix(20, 50, stream);
        const Eigen::VectorXd y = random_vector(20, stream);
        const double lambda_max =
            2.0 * (A.transpose() * y).cwiseAbs().maxCoeff();
        const double factors[3] = {0.01, 0.1, 1.0};
        const double lambda = factors[rep % 3] * lambda_max;

        const FitResult fit = solve_lasso(A, y, raw_config(lambda));
        const auto oracle = oracles::lasso_proximal_oracle(A, y, lambda);
        INFO("instance ", instance, " lambda ", lambda);
        CHECK(std::abs(fit.objective - oracle.objective) < 1e-6);
        ++instance;
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    CHECK(elapsed < 5.0);
}

TEST_CASE("lasso objective never exceeds the zero solution") {
    RandomStream stream(303);
    for (int rep = 0; rep < 10; ++rep) {
        const Eigen::MatrixXd A = random_matrix(15, 40, stream);
        const Eigen::VectorXd y = random_vector(15, stream);
        const FitResult fit =
            solve_lasso(A, y, raw_config(0.3 * stream.uniform(0.1, 5.0)));
        CHECK(fit.objective <= y.squaredNorm() + 1e-10);
    }
}

TEST_CASE("sweep objectives are non-increasing") {
    RandomStream stream(404);
    const Eigen::MatrixXd A = random_matrix(30, 80, stream);
    const Eigen::VectorXd y = random_vector(30, stream);
    SolverConfig cfg = raw_config(0.5);
    const FitResult fit = solve_lasso(A, y, cfg);
    REQUIRE(fit.sweep_objectives.size() >= 2);
    for (std::size_t i = 1; i < fit.sweep_objectives.size(); ++i)
        CHECK(fit.sweep_objectives[i] <=
              fit.sweep_objectives[i - 1] *
                  (1.0 + 1e-12) + 1e-12);
}

TEST_CASE("stronger regularization cannot grow the seeded support") {
    RandomStream stream(505);
    const Eigen::MatrixXd A = random_matrix(25, 60, stream);
    const Eigen::VectorXd y = random_vector(25, stream);
    const double lambda0 =
        0.02 * 2.0 * (A.transpose() * y).cwiseAbs().maxCoeff();
    const FitResult weak = solve_lasso(A, y, raw_config(lambda0));
    const FitResult strong = solve_lasso(A, y, raw_config(10.0 * lambda0));
    CHECK(strong.nnz <= weak.nnz);
}

TEST_CASE("ridge closed form on the identity") {
    const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(2, 2);
    Eigen::VectorXd y(2);
    y << 1.0, 1.0;
    const FitResult fit = solve_ridge(A, y, raw_config(2.0));
    CHECK(fit.coefficients(0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(fit.coefficients(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("unregularized ridge solves the square system exactly") {
    RandomStream stream(606);
    Eigen::MatrixXd A = random_matrix(6, 6, stream);
    A += 3.0 * Eigen::MatrixXd::Identity(6, 6); // keep it well conditioned
    const Eigen::VectorXd y = random_vector(6, stream);
    const FitResult fit = solve_ridge(A, y, raw_config(0.0));
    const Eigen::VectorXd expected = A.fullPivLu().solve(y);
    CHECK((fit.coefficients - expected).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("huge lambda shrinks ridge coefficients toward zero") {
    RandomStream stream(707);
    const Eigen::MatrixXd A = random_matrix(10, 4, stream);
    const Eigen::VectorXd y = random_vector(10, stream);
    const double lambda = 1e12;
    const FitResult fit = solve_ridge(A, y, raw_config(lambda));
    CHECK(fit.coefficients.norm() <= (A.transpose() * y).norm() / lambda +
                                         1e-12);
}

TEST_CASE("dual and primal ridge paths agree") {
    RandomStream stream(808);
    const Eigen::MatrixXd A = random_matrix(10, 30, stream); // R > m -> dual
    const Eigen::VectorXd y = random_vector(10, stream);
    const FitResult dual = solve_ridge(A, y, raw_config(0.7));

    // Force the primal path by solving the padded problem with R <= m.
    Eigen::MatrixXd G = A.transpose() * A;
    G.diagonal().array() += 0.7;
    const Eigen::VectorXd primal = G.ldlt().solve(A.transpose() * y);
    CHECK((dual.coefficients - primal).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("rank-deficient unregularized systems are rejected") {
    Eigen::MatrixXd A(4, 6); // more columns than rows
    A.setRandom();
    Eigen::VectorXd y(4);
    y.setRandom();
    CHECK_THROWS_AS(solve_ridge(A, y, raw_config(0.0)), SingularSystem);

    Eigen::MatrixXd repeated(6, 3);
    repeated.col(0).setOnes();
    repeated.col(1).setOnes(); // exact duplicate column
    repeated.col(2).setRandom();
    Eigen::VectorXd y6(6);
    y6.setRandom();
    CHECK_THROWS_AS(solve_ridge(repeated, y6, raw_config(0.0)),
                    SingularSystem);
}

TEST_CASE("lasso and ridge coincide at lambda 0 on full-rank systems") {
    RandomStream stream(909);
    const Eigen::MatrixXd A = random_matrix(50, 10, stream);
    const Eigen::VectorXd y = random_vector(50, stream);
    const FitResult lasso = solve_lasso(A, y, raw_config(0.0));
    const FitResult ridge = solve_ridge(A, y, raw_config(0.0));
    const double scale = ridge.coefficients.cwiseAbs().maxCoeff();
    CHECK((lasso.coefficients - ridge.coefficients).cwiseAbs().maxCoeff() <
          1e-8 * scale);
}

TEST_CASE("standardization leaves lambda-0 training predictions unchanged") {
    RandomStream stream(1010);
    Eigen::MatrixXd A = random_matrix(40, 8, stream);
    A.col(3) *= 50.0; // heterogeneous scales
    A.col(5) *= 0.02;
    const Eigen::VectorXd y = random_vector(40, stream);

    for (const bool use_lasso : {true, false}) {
        SolverConfig plain;
        plain.lambda = 0.0;
        plain.standardize = false;
        plain.fit_intercept = true;
        plain.tol = 1e-13;
        plain.max_iter = 50000;
        SolverConfig scaled = plain;
        scaled.standardize = true;

        const FitResult a = use_lasso ? solve_lasso(A, y, plain)
                                      : solve_ridge(A, y, plain);
        const FitResult b = use_lasso ? solve_lasso(A, y, scaled)
                                      : solve_ridge(A, y, scaled);
        const Eigen::VectorXd pred_a =
            (A * a.coefficients).array() + a.intercept;
        const Eigen::VectorXd pred_b =
            (A * b.coefficients).array() + b.intercept;
        CHECK((pred_a - pred_b).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("constant columns get coefficient zero") {
    RandomStream stream(1111);
    Eigen::MatrixXd A = random_matrix(20, 5, stream);
    A.col(2).setConstant(4.0);
    const Eigen::VectorXd y = random_vector(20, stream);
    SolverConfig cfg;
    cfg.lambda = 0.01;
    const FitResult fit = solve_lasso(A, y, cfg);
    CHECK(fit.coefficients(2) == 0.0);
}

TEST_CASE("auto lambda reproduces the documented rule") {
    RandomStream stream(1212);
    const Eigen::MatrixXd A = random_matrix(30, 12, stream);
    const Eigen::VectorXd y = random_vector(30, stream);
    SolverConfig cfg; // defaults: standardize + intercept, lambda auto
    const FitResult fit = solve_lasso(A, y, cfg);
    CHECK(fit.lambda_used ==
          doctest::Approx(1e-3 * lasso_lambda_max(A, y, cfg)));
}

TEST_CASE("non-finite inputs are rejected") {
    Eigen::MatrixXd A = Eigen::MatrixXd::Ones(3, 3);
    Eigen::VectorXd y = Eigen::VectorXd::Ones(3);
    A(1, 1) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(solve_lasso(A, y, raw_config(0.1)), NonFiniteInput);
    A(1, 1) = 1.0;
    y(0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(solve_ridge(A, y, raw_config(0.1)), NonFiniteInput);
}

} // TEST_SUITE
