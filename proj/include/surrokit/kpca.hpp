#pragma once

#include <Eigen/Core>

#include "surrokit/errors.hpp"

namespace surrokit {

/// Bandwidth bounds: PSO explores freely, and theta -> 0 turns the kernel
/// matrix into the identity while 1/theta^2 overflows, so every use clamps.
constexpr double kThetaMin = 1e-3;
constexpr double kThetaMax = 1e3;

/// Per-coordinate bandwidths of the nonisotropic Gaussian kernel.
struct KernelParams {
    Eigen::VectorXd theta;

    Eigen::VectorXd clamped() const {
        return theta.cwiseMax(kThetaMin).cwiseMin(kThetaMax);
    }
};

/// Fitted kernel PCA reduction map. Holds everything needed to project
/// out-of-sample points: the training set, bandwidths, the eigenvectors of
/// the (optionally double-centered) kernel matrix scaled so the implicit
/// feature-space axes have unit norm, and the centering statistics.
struct KpcaModel {
    Eigen::MatrixXd training_points; // N x d
    Eigen::VectorXd theta;           // clamped bandwidths, size d
    Eigen::Index k = 0;              // number of axes kept
    Eigen::MatrixXd alphas;          // N x k, column m is alpha^m
    Eigen::VectorXd eigenvalues;     // k entries, descending
    Eigen::VectorXd row_means;       // row means of the training kernel matrix
    double grand_mean = 0.0;
    bool centered = true;
    bool truncated = false; // fewer axes than requested survived the floor

    /// Coordinates of the training points on the fitted axes; equals
    /// project(*this, training_points) up to round-off.
    Eigen::MatrixXd fitted_projections() const {
        return alphas * eigenvalues.asDiagonal();
    }
};

/// exp(-1/2 sum_i (x_i - y_i)^2 / theta_i^2); symmetric, in (0, 1].
double gaussian_kernel(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                       const KernelParams& params);

/// Fits the k leading kernel principal axes. Eigenpairs below
/// 1e-10 * lambda_max are discarded; if fewer than requested survive the
/// model is truncated (and DegenerateKernel is thrown when none survive).
KpcaModel fit_kpca(const Eigen::MatrixXd& points, const KernelParams& params,
                   Eigen::Index k, bool center = true);

/// Projects points onto the fitted axes (rows in, rows out, M x k).
Eigen::MatrixXd project(const KpcaModel& model, const Eigen::MatrixXd& points);

} // namespace surrokit
