#include "oracles/lasso_ista.hpp"

#include <cmath>

namespace surrokit::oracles {

namespace {

Eigen::VectorXd soft(const Eigen::VectorXd& v, double t) {
    return v.unaryExpr([t](double x) {
        if (x > t) return x - t;
        if (x < -t) return x + t;
        return 0.0;
    });
}

double objective(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                 double lambda, const Eigen::VectorXd& c) {
    return lambda * c.lpNorm<1>() + (A * c - y).squaredNorm();
}

} // namespace

IstaResult lasso_proximal_oracle(const Eigen::MatrixXd& A,
                                 const Eigen::VectorXd& y, double lambda,
                                 double tol, long max_iter) {
    const Eigen::Index R = A.cols();
    Eigen::VectorXd c = Eigen::VectorXd::Zero(R);
    double step = 1.0;

    IstaResult result;
    for (long it = 0; it < max_iter; ++it) {
        const Eigen::VectorXd residual = A * c - y;
        const double smooth = residual.squaredNorm();
        const Eigen::VectorXd grad = 2.0 * (A.transpose() * residual);

        // Backtracking on the quadratic upper bound of the smooth part.
        Eigen::VectorXd next;
        for (;;) {
            next = soft(c - step * grad, step * lambda);
            const Eigen::VectorXd diff = next - c;
            const double smooth_next = (A * next - y).squaredNorm();
            const double bound = smooth + grad.dot(diff) +
                                 diff.squaredNorm() / (2.0 * step);
            if (smooth_next <= bound + 1e-15 * (1.0 + std::abs(bound))) break;
            step *= 0.5;
        }
        const double change = (next - c).cwiseAbs().maxCoeff();
        c = next;
        result.iterations = it + 1;
        if (change <= tol) {
            result.converged = true;
            break;
        }
        step *= 1.1; // allow the step to grow back between iterations
    }
    result.coefficients = c;
    result.objective = objective(A, y, lambda, c);
    return result;
}

} // namespace surrokit::oracles
