#pragma once

#include <Eigen/Core>

#include "surrokit/core.hpp"
#include "surrokit/errors.hpp"

namespace surrokit {

/// Configuration of the synthetic product-function benchmark dataset.
struct SobolSpec {
    Eigen::Index dim = 20;
    Eigen::VectorXd u;
    Eigen::Index n_train = 800;
    Eigen::Index n_val = 1200;
    Eigen::Index n_test = 2000;
    long skip = 1; // points of the sequence to discard before sampling
};

/// G-function: prod_i (|4 x_i - 2| + u_i) / (1 + u_i); each coefficient u_i
/// damps the influence of coordinate i. Defined on the unit cube only.
double g_function(const Eigen::VectorXd& x, const Eigen::VectorXd& u);

/// The reference coefficient vector {1, 2, 5, 20, 50, 100, 500, ..., 500}
/// commonly used to give the benchmark an intrinsic dimension of about 6.
/// Requires dim >= 7; entries past the seventh repeat 500.
Eigen::VectorXd reference_u(Eigen::Index dim);

/// First n points of the Sobol low-discrepancy sequence (Joe-Kuo D6
/// direction numbers, Gray-code order) after discarding `skip` points.
/// Supports dimensions 1..64.
Eigen::MatrixXd sobol_sequence(Eigen::Index dim, Eigen::Index n, long skip);

/// Draws n_train + n_val + n_test sequential Sobol points, evaluates the
/// G-function, and assigns them contiguously to train/validation/test.
SplitDataset make_sobol_dataset(const SobolSpec& spec);

} // namespace surrokit
