#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "surrokit/errors.hpp"

namespace surrokit {

/// Basis applied to the projection <x, w> of a point onto a feature weight.
enum class BasisKind { Cos, Sin, Relu };

const char* basis_name(BasisKind kind);
BasisKind basis_from_name(const std::string& name);

/// A batch of R random feature weights in dimension `dim`, each supported on
/// exactly min(q, dim) coordinates with i.i.d. Gaussian nonzero entries.
struct FeatureWeights {
    Eigen::Index dim = 0;
    Eigen::Index q = 0;   // requested sparsity order (before clamping)
    double sigma = 1.0;
    std::uint64_t seed = 0;
    std::vector<std::vector<Eigen::Index>> supports; // R sorted index sets
    std::vector<std::vector<double>> values;         // matching nonzero values

    Eigen::Index count() const {
        return static_cast<Eigen::Index>(supports.size());
    }
    Eigen::Index support_size() const { return std::min(q, dim); }

    /// Dense view of weight j (zeros off support).
    Eigen::VectorXd dense_weight(Eigen::Index j) const;
};

/// A fitted random feature expansion: x -> intercept + sum_j c_j phi(<x,w_j>).
struct RandomFeatureModel {
    BasisKind basis = BasisKind::Cos;
    FeatureWeights weights;
    Eigen::VectorXd coefficients;
    double intercept = 0.0;
};

/// Draws R supports uniformly (with replacement) among the size-min(q,dim)
/// subsets of {0..dim-1} and fills them with N(0, sigma^2) values.
/// Fully determined by (dim, q, R, sigma, seed).
FeatureWeights draw_feature_weights(Eigen::Index dim, Eigen::Index q,
                                    Eigen::Index R, double sigma,
                                    std::uint64_t seed);

/// A[i][j] = phi(<points.row(i), w_j>) for the given basis. Column-major.
Eigen::MatrixXd feature_matrix(const Eigen::MatrixXd& points,
                               const FeatureWeights& weights, BasisKind basis);

/// intercept + feature_matrix(points) * coefficients, evaluated in row
/// blocks so large feature counts never materialize the full matrix.
Eigen::VectorXd evaluate_expansion(const RandomFeatureModel& model,
                                   const Eigen::MatrixXd& points);

} // namespace surrokit
