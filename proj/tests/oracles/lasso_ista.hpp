#pragma once

#include <Eigen/Core>

// Test-only reference solver for lambda*|c|_1 + |Ac - y|_2^2: plain proximal
// gradient (ISTA) with backtracking, sharing no code with the production
// coordinate descent path.
namespace surrokit::oracles {

struct IstaResult {
    Eigen::VectorXd coefficients;
    double objective = 0.0;
    bool converged = false;
    long iterations = 0;
};

IstaResult lasso_proximal_oracle(const Eigen::MatrixXd& A,
                                 const Eigen::VectorXd& y, double lambda,
                                 double tol = 1e-12,
                                 long max_iter = 2000000);

} // namespace surrokit::oracles
