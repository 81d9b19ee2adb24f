#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "surrokit/errors.hpp"

namespace surrokit {

struct SolverConfig {
    /// Regularization weight. Empty selects a data-driven default:
    /// 1e-3 * lambda_max for the lasso, 1e-3 * |A|_F^2 / min(m,R) for ridge.
    std::optional<double> lambda;
    double tol = 1e-6;     // max absolute coefficient change per sweep
    int max_iter = 1000;   // coordinate descent sweeps
    bool standardize = true;
    bool fit_intercept = true;
};

struct FitResult {
    Eigen::VectorXd coefficients;
    double intercept = 0.0;
    double objective = 0.0; // penalty + squared residual at the solution
    int n_iter = 0;
    bool converged = false;
    Eigen::Index nnz = 0;
    double lambda_used = 0.0;
    std::vector<double> sweep_objectives; // one entry per CD sweep
};

/// Smallest lambda for which the lasso solution is exactly zero, computed in
/// the same (optionally centered/standardized) space the solver works in.
double lasso_lambda_max(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                        const SolverConfig& cfg);

/// Minimizes lambda*|c|_1 + |A c - y|_2^2 by cyclic coordinate descent with
/// soft thresholding; an active-set pass follows each full sweep.
FitResult solve_lasso(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                      const SolverConfig& cfg);

/// Minimizes lambda*|c|_2^2 + |A c - y|_2^2 through the normal equations
/// with a Cholesky factorization; uses the m x m dual form when R > m and
/// lambda > 0.
FitResult solve_ridge(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                      const SolverConfig& cfg);

/// Ridge solutions for several positive regularization weights, sharing one
/// preprocessing pass and one Gram matrix. cfg.lambda is ignored.
std::vector<FitResult> solve_ridge_path(const Eigen::MatrixXd& A,
                                        const Eigen::VectorXd& y,
                                        const std::vector<double>& lambdas,
                                        const SolverConfig& cfg);

} // namespace surrokit
