#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "surrokit/errors.hpp"

namespace surrokit {

/// Experimental design points paired with scalar model responses.
/// Rows of `points` are the design points; `responses[i]` belongs to row i.
struct Dataset {
    Eigen::MatrixXd points;     // n × d
    Eigen::VectorXd responses;  // n
    std::vector<std::string> column_names; // optional, d entries when present

    Eigen::Index size() const { return points.rows(); }
    Eigen::Index dim() const { return points.cols(); }

    /// Enforces the structural invariants (matching sizes, finite entries).
    void validate() const;
};

struct SplitDataset {
    Dataset train;
    Dataset validation;
    Dataset test;
};

/// Result of evaluating predictions against reference responses.
struct EvalReport {
    double error = 0.0;       // relative generalization error, >= 0
    Eigen::Index n_points = 0;
    double sample_mean = 0.0; // mean of the reference responses
};

/// Relative generalization error: sum of squared residuals divided by the
/// total sum of squares about the sample mean of `y_true`. An error of 1
/// means the predictor is no better than predicting that mean.
EvalReport relative_error(const Eigen::VectorXd& y_true,
                          const Eigen::VectorXd& y_pred);

/// Deterministic three-way split: shuffle indices under `seed`, then assign
/// the first n_train to train, the next n_val to validation, the next n_test
/// to test. Leftover points are dropped.
SplitDataset split_dataset(const Dataset& data, Eigen::Index n_train,
                           Eigen::Index n_val, Eigen::Index n_test,
                           std::uint64_t seed);

} // namespace surrokit
