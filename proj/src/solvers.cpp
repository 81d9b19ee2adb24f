#include "surrokit/solvers.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>

#include "surrokit/simd.hpp"

namespace surrokit {

namespace {

struct Workspace {
    Eigen::MatrixXd A;          // transformed copy, column-major
    Eigen::VectorXd y;          // centered response
    Eigen::VectorXd col_mean;   // zeros unless fit_intercept
    Eigen::VectorXd col_scale;  // ones unless standardize
    double y_mean = 0.0;
};

void check_inputs(const Eigen::MatrixXd& A, const Eigen::VectorXd& y) {
    if (A.rows() < 1 || A.cols() < 1)
        throw InsufficientData("solver needs a nonempty design matrix");
    if (A.rows() != y.size())
        throw LengthMismatch("design matrix has " + std::to_string(A.rows()) +
                             " rows but y has " + std::to_string(y.size()));
    if (!A.allFinite() || !y.allFinite())
        throw NonFiniteInput("solver inputs contain NaN or Inf");
}

Workspace preprocess(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                     const SolverConfig& cfg) {
    const Eigen::Index m = A.rows();
    const Eigen::Index R = A.cols();
    Workspace ws;
    ws.A = A;
    ws.y = y;
    ws.col_mean = Eigen::VectorXd::Zero(R);
    ws.col_scale = Eigen::VectorXd::Ones(R);

    if (cfg.fit_intercept) {
        ws.y_mean = y.mean();
        ws.y.array() -= ws.y_mean;
        ws.col_mean = ws.A.colwise().mean();
        ws.A.rowwise() -= ws.col_mean.transpose();
    }
    if (cfg.standardize) {
        for (Eigen::Index j = 0; j < R; ++j) {
            const double scale =
                std::sqrt(ws.A.col(j).squaredNorm() / static_cast<double>(m));
            if (scale > 0.0) {
                ws.col_scale(j) = scale;
                ws.A.col(j) /= scale;
            }
        }
    }
    return ws;
}

// Maps coefficients from the solved space back to the original columns and
// fills the shared parts of the result.
void finish(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
            const SolverConfig& cfg, const Workspace& ws,
            const Eigen::VectorXd& c_solved, bool l1_penalty,
            FitResult& result) {
    const Eigen::Index R = A.cols();
    result.coefficients = c_solved.cwiseQuotient(ws.col_scale);
    result.intercept =
        cfg.fit_intercept
            ? ws.y_mean - result.coefficients.dot(ws.col_mean)
            : 0.0;

    const Eigen::VectorXd residual =
        ((A * result.coefficients).array() + result.intercept - y.array())
            .matrix();
    const double penalty = l1_penalty ? result.coefficients.lpNorm<1>()
                                      : result.coefficients.squaredNorm();
    result.objective = result.lambda_used * penalty + residual.squaredNorm();
    result.nnz = 0;
    for (Eigen::Index j = 0; j < R; ++j)
        if (result.coefficients(j) != 0.0) ++result.nnz;
    if (!result.coefficients.allFinite() || !std::isfinite(result.intercept))
        throw SingularSystem("solver produced non-finite coefficients");
}

inline double soft_threshold(double g, double t) {
    if (g > t) return g - t;
    if (g < -t) return g + t;
    return 0.0;
}

// Uses the same dot kernel as the descent loop, so a lambda taken exactly at
// the threshold really does yield the all-zero solution.
double lambda_max_in_workspace(const Workspace& ws) {
    const std::size_t m = static_cast<std::size_t>(ws.A.rows());
    double best = 0.0;
    for (Eigen::Index j = 0; j < ws.A.cols(); ++j)
        best = std::max(best,
                        std::abs(simd::dot(ws.A.col(j).data(), ws.y.data(), m)));
    return 2.0 * best;
}

} // namespace

double lasso_lambda_max(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                        const SolverConfig& cfg) {
    check_inputs(A, y);
    const Workspace ws = preprocess(A, y, cfg);
    return lambda_max_in_workspace(ws);
}

FitResult solve_lasso(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                      const SolverConfig& cfg) {
    check_inputs(A, y);
    if (cfg.tol <= 0.0 || cfg.max_iter < 1)
        throw ConfigError("solver tolerance/max_iter out of range");

    Workspace ws = preprocess(A, y, cfg);
    const Eigen::Index m = A.rows();
    const Eigen::Index R = A.cols();

    FitResult result;
    const double lambda =
        cfg.lambda.value_or(1e-3 * lambda_max_in_workspace(ws));
    if (lambda < 0.0) throw ConfigError("lambda must be nonnegative");
    result.lambda_used = lambda;
    const double threshold = 0.5 * lambda;

    Eigen::VectorXd norms(R);
    for (Eigen::Index j = 0; j < R; ++j) norms(j) = ws.A.col(j).squaredNorm();

    Eigen::VectorXd c = Eigen::VectorXd::Zero(R);
    Eigen::VectorXd r = ws.y;
    std::vector<Eigen::Index> active;
    active.reserve(static_cast<std::size_t>(R));

    auto update_coordinate = [&](Eigen::Index j) -> double {
        if (norms(j) <= 0.0) return 0.0;
        const double* col = ws.A.col(j).data();
        const double g =
            simd::dot(col, r.data(), static_cast<std::size_t>(m)) +
            norms(j) * c(j);
        const double next = soft_threshold(g, threshold) / norms(j);
        const double delta = next - c(j);
        if (delta != 0.0) {
            simd::axpy(-delta, col, r.data(), static_cast<std::size_t>(m));
            c(j) = next;
        }
        return std::abs(delta);
    };

    auto record_objective = [&]() {
        result.sweep_objectives.push_back(lambda * c.lpNorm<1>() +
                                          r.squaredNorm());
    };

    int sweeps = 0;
    bool converged = false;
    while (sweeps < cfg.max_iter) {
        // Full sweep over all coordinates.
        double max_delta = 0.0;
        for (Eigen::Index j = 0; j < R; ++j)
            max_delta = std::max(max_delta, update_coordinate(j));
        ++sweeps;
        record_objective();
        if (max_delta <= cfg.tol) {
            converged = true;
            break;
        }
        // Iterate on the current active set until it stabilizes.
        active.clear();
        for (Eigen::Index j = 0; j < R; ++j)
            if (c(j) != 0.0) active.push_back(j);
        while (sweeps < cfg.max_iter) {
            double inner_delta = 0.0;
            for (const Eigen::Index j : active)
                inner_delta = std::max(inner_delta, update_coordinate(j));
            ++sweeps;
            record_objective();
            if (inner_delta <= cfg.tol) break;
        }
    }

    result.n_iter = sweeps;
    result.converged = converged;
    finish(A, y, cfg, ws, c, /*l1_penalty=*/true, result);
    return result;
}

namespace {

Eigen::VectorXd ridge_solve_in_workspace(const Workspace& ws, double lambda,
                                         const Eigen::MatrixXd* gram_dual,
                                         const Eigen::MatrixXd* gram_primal) {
    if (lambda > 0.0 && gram_dual) {
        // Dual form: c = A^T (A A^T + lambda I)^{-1} y, same minimizer as the
        // normal equations but factorizing the smaller m x m system.
        Eigen::MatrixXd G = *gram_dual;
        G.diagonal().array() += lambda;
        Eigen::LLT<Eigen::MatrixXd> llt(G);
        if (llt.info() != Eigen::Success)
            throw SingularSystem("ridge dual system is not positive definite");
        return ws.A.transpose() * llt.solve(ws.y);
    }
    if (lambda > 0.0) {
        Eigen::MatrixXd G = *gram_primal;
        G.diagonal().array() += lambda;
        Eigen::LLT<Eigen::MatrixXd> llt(G);
        if (llt.info() != Eigen::Success)
            throw SingularSystem("ridge system is not positive definite");
        return llt.solve(ws.A.transpose() * ws.y);
    }
    // lambda = 0: plain normal equations. LDLT pivots expose rank
    // deficiency that a Cholesky could slip past numerically.
    Eigen::LDLT<Eigen::MatrixXd> ldlt(*gram_primal);
    const Eigen::VectorXd d = ldlt.vectorD();
    const double dmax = d.cwiseAbs().maxCoeff();
    if (ldlt.info() != Eigen::Success || !(dmax > 0.0) ||
        d.minCoeff() < 1e-12 * dmax)
        throw SingularSystem(
            "normal equations are singular (rank-deficient design and "
            "lambda = 0)");
    return ldlt.solve(ws.A.transpose() * ws.y);
}

} // namespace

FitResult solve_ridge(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                      const SolverConfig& cfg) {
    check_inputs(A, y);
    Workspace ws = preprocess(A, y, cfg);
    const Eigen::Index m = A.rows();
    const Eigen::Index R = A.cols();

    FitResult result;
    // Default: one percent of the mean squared column norm, i.e. 0.01 * m on
    // standardized designs.
    const double lambda = cfg.lambda.value_or(
        1e-2 * ws.A.squaredNorm() / static_cast<double>(R));
    if (lambda < 0.0) throw ConfigError("lambda must be nonnegative");
    result.lambda_used = lambda;

    Eigen::MatrixXd gram;
    const bool dual = lambda > 0.0 && R > m;
    if (dual)
        gram = ws.A * ws.A.transpose();
    else
        gram = ws.A.transpose() * ws.A;
    const Eigen::VectorXd c_solved = ridge_solve_in_workspace(
        ws, lambda, dual ? &gram : nullptr, dual ? nullptr : &gram);

    result.n_iter = 1;
    result.converged = true;
    finish(A, y, cfg, ws, c_solved, /*l1_penalty=*/false, result);
    return result;
}

std::vector<FitResult> solve_ridge_path(const Eigen::MatrixXd& A,
                                        const Eigen::VectorXd& y,
                                        const std::vector<double>& lambdas,
                                        const SolverConfig& cfg) {
    check_inputs(A, y);
    if (lambdas.empty()) throw ConfigError("ridge path needs lambdas");
    for (const double lambda : lambdas)
        if (!(lambda > 0.0))
            throw ConfigError("ridge path lambdas must be positive");

    Workspace ws = preprocess(A, y, cfg);
    const Eigen::Index m = A.rows();
    const Eigen::Index R = A.cols();
    const bool dual = R > m;
    const Eigen::MatrixXd gram =
        dual ? (ws.A * ws.A.transpose()).eval()
             : (ws.A.transpose() * ws.A).eval();

    std::vector<FitResult> results;
    results.reserve(lambdas.size());
    for (const double lambda : lambdas) {
        FitResult result;
        result.lambda_used = lambda;
        const Eigen::VectorXd c_solved = ridge_solve_in_workspace(
            ws, lambda, dual ? &gram : nullptr, dual ? nullptr : &gram);
        result.n_iter = 1;
        result.converged = true;
        finish(A, y, cfg, ws, c_solved, /*l1_penalty=*/false, result);
        results.push_back(std::move(result));
    }
    return results;
}

} // namespace surrokit
