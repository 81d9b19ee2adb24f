#include "surrokit/kpca.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "surrokit/simd.hpp"

namespace surrokit {

namespace {

constexpr double kEigenFloorRel = 1e-10;

Eigen::VectorXd inverse_theta_squared(const Eigen::VectorXd& theta) {
    const Eigen::VectorXd t =
        theta.cwiseMax(kThetaMin).cwiseMin(kThetaMax);
    return t.array().square().inverse();
}

// K[i][j] = exp(-1/2 * sum_d (a_i - b_j)^2 / theta^2). Points are handed in
// transposed (d x n) so each point is a contiguous column.
Eigen::MatrixXd kernel_cross(const Eigen::MatrixXd& at,
                             const Eigen::MatrixXd& bt,
                             const Eigen::VectorXd& inv_theta_sq) {
    const Eigen::Index na = at.cols();
    const Eigen::Index nb = bt.cols();
    const std::size_t d = static_cast<std::size_t>(at.rows());
    Eigen::MatrixXd K(na, nb);
    for (Eigen::Index j = 0; j < nb; ++j) {
        const double* bj = bt.col(j).data();
        double* col = K.col(j).data();
        for (Eigen::Index i = 0; i < na; ++i)
            col[i] = -0.5 * simd::weighted_sqdist(at.col(i).data(), bj,
                                                  inv_theta_sq.data(), d);
        simd::vexp(col, col, static_cast<std::size_t>(na));
    }
    return K;
}

Eigen::MatrixXd kernel_self(const Eigen::MatrixXd& at,
                            const Eigen::VectorXd& inv_theta_sq) {
    const Eigen::Index n = at.cols();
    const std::size_t d = static_cast<std::size_t>(at.rows());
    Eigen::MatrixXd K(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double* col = K.col(j).data();
        col[j] = 0.0;
        for (Eigen::Index i = j + 1; i < n; ++i)
            col[i] = -0.5 * simd::weighted_sqdist(at.col(i).data(),
                                                  at.col(j).data(),
                                                  inv_theta_sq.data(), d);
        simd::vexp(col + j, col + j, static_cast<std::size_t>(n - j));
        for (Eigen::Index i = j + 1; i < n; ++i) K(j, i) = col[i];
    }
    return K;
}

// Flip each column so its largest-magnitude entry is positive; ties resolve
// to the first maximal index so the output is eigensolver-independent.
void fix_signs(Eigen::MatrixXd& alphas) {
    for (Eigen::Index m = 0; m < alphas.cols(); ++m) {
        Eigen::Index best = 0;
        double best_abs = -1.0;
        for (Eigen::Index i = 0; i < alphas.rows(); ++i) {
            const double a = std::abs(alphas(i, m));
            if (a > best_abs) {
                best_abs = a;
                best = i;
            }
        }
        if (alphas(best, m) < 0.0) alphas.col(m) = -alphas.col(m);
    }
}

} // namespace

double gaussian_kernel(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                       const KernelParams& params) {
    if (x.size() != y.size() || x.size() != params.theta.size())
        throw DimensionMismatch("gaussian_kernel dimension mismatch");
    const Eigen::VectorXd w = inverse_theta_squared(params.theta);
    const double sq = simd::weighted_sqdist(
        x.data(), y.data(), w.data(), static_cast<std::size_t>(x.size()));
    return std::exp(-0.5 * sq);
}

KpcaModel fit_kpca(const Eigen::MatrixXd& points, const KernelParams& params,
                   Eigen::Index k, bool center) {
    const Eigen::Index n = points.rows();
    if (n < 2) throw InsufficientData("kernel PCA needs at least 2 points");
    if (k < 1 || k > n)
        throw DimensionMismatch("latent dimension must be in [1, N]");
    if (points.cols() != params.theta.size())
        throw DimensionMismatch("theta size does not match point dimension");
    if (!points.allFinite() || !params.theta.allFinite())
        throw NonFiniteInput("kernel PCA inputs must be finite");

    KpcaModel model;
    model.training_points = points;
    model.theta = params.clamped();
    model.centered = center;

    const Eigen::MatrixXd transposed = points.transpose();
    const Eigen::VectorXd inv_theta_sq = inverse_theta_squared(model.theta);
    Eigen::MatrixXd K = kernel_self(transposed, inv_theta_sq);

    model.row_means = K.rowwise().mean();
    model.grand_mean = model.row_means.mean();
    if (center) {
        K.colwise() -= model.row_means;
        K.rowwise() -= model.row_means.transpose();
        K.array() += model.grand_mean;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(K);
    if (solver.info() != Eigen::Success)
        throw DegenerateKernel("kernel eigendecomposition failed");

    // Eigen returns ascending order; walk from the top.
    const Eigen::VectorXd& evals = solver.eigenvalues();
    const double lambda_max = evals(n - 1);
    if (!(lambda_max > 0.0))
        throw DegenerateKernel("kernel matrix has no positive eigenvalues");
    const double floor = kEigenFloorRel * lambda_max;

    Eigen::Index kept = 0;
    while (kept < k && evals(n - 1 - kept) > floor) ++kept;
    if (kept == 0)
        throw DegenerateKernel("all eigenvalues fell below the floor");
    model.truncated = kept < k;
    model.k = kept;

    model.eigenvalues.resize(kept);
    model.alphas.resize(n, kept);
    for (Eigen::Index m = 0; m < kept; ++m) {
        const double lambda = evals(n - 1 - m);
        model.eigenvalues(m) = lambda;
        // Scale so the implicit feature-space axis has unit norm:
        // lambda * |alpha|^2 = 1.
        model.alphas.col(m) =
            solver.eigenvectors().col(n - 1 - m) / std::sqrt(lambda);
    }
    fix_signs(model.alphas);
    return model;
}

Eigen::MatrixXd project(const KpcaModel& model, const Eigen::MatrixXd& points) {
    if (points.cols() != model.training_points.cols())
        throw DimensionMismatch("projection input dimension mismatch");
    if (!points.allFinite())
        throw NonFiniteInput("projection input must be finite");

    const Eigen::MatrixXd test_t = points.transpose();
    const Eigen::MatrixXd train_t = model.training_points.transpose();
    const Eigen::VectorXd inv_theta_sq = inverse_theta_squared(model.theta);
    // M x N cross-kernel between the query points and the training set.
    Eigen::MatrixXd Kx = kernel_cross(test_t, train_t, inv_theta_sq);
    if (model.centered) {
        const Eigen::VectorXd point_means = Kx.rowwise().mean();
        Kx.colwise() -= point_means;
        Kx.rowwise() -= model.row_means.transpose();
        Kx.array() += model.grand_mean;
    }
    return Kx * model.alphas;
}

} // namespace surrokit
