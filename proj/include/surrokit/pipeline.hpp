#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "surrokit/core.hpp"
#include "surrokit/features.hpp"
#include "surrokit/kpca.hpp"
#include "surrokit/pso.hpp"

namespace surrokit {

/// Configuration of the self-supervised sweep: for every candidate latent
/// dimension the KPCA bandwidths are tuned by PSO against the validation
/// error of a random-feature surrogate fitted in the reduced space, with a
/// cheap ridge fit during exploration and the lasso once the swarm settles.
struct PipelineConfig {
    std::vector<Eigen::Index> dims;  // candidate latent dimensions, ascending
    Eigen::Index R = 2000;           // random feature count
    Eigen::Index q = 2;              // feature sparsity order
    double sigma = 1.0;              // std dev of nonzero feature weights
    BasisKind basis = BasisKind::Cos;
    std::optional<double> eta;          // swarm-settled threshold;
                                        // default 1e-2 * sqrt(input dim)
    std::optional<double> lambda_ridge; // empty -> solver default
    std::optional<double> lambda_lasso; // empty -> 1e-3 * lambda_max rule
    PsoConfig pso;          // particle count, constants, bounds; seed and
                            // iteration count are overridden per dimension
    int n_iterations = 30;  // PSO budget per dimension
    std::uint64_t seed = 0;
    int threads = 0;        // 0 = hardware concurrency
    bool center_kpca = true;
    bool fit_intercept = true;
    bool standardize = true;
};

struct DimensionReport {
    Eigen::Index k = 0;
    Eigen::VectorXd best_theta;
    double best_val_error = 0.0; // min over the gbest trace
    int iterations_run = 0;
    std::optional<int> switch_iteration; // iteration the lasso phase began
    std::vector<double> gbest_trace;     // gbest loss after each iteration
    std::vector<char> phases;            // 'r' or 'l', aligned with the trace
    double final_val_error = 0.0; // validation error of the final lasso refit
    Eigen::Index final_nnz = 0;   // active features in the final refit
};

/// The selected reduction map composed with the fitted expansion. The
/// projected coordinates are divided by their per-axis training spread
/// before feature evaluation: the feature weight scale is fixed, so the
/// latent coordinates must arrive in comparable units.
struct CompositeSurrogate {
    KpcaModel kpca;
    RandomFeatureModel rfe;
    Eigen::VectorXd latent_scale; // per-axis divisor, size k
    Eigen::Index k_star = 0;
    double validation_error = 0.0;
};

struct DimensionFit {
    DimensionReport report;
    CompositeSurrogate surrogate;
};

/// Tunes one latent dimension k and returns the lasso-refit surrogate at the
/// best bandwidths found.
DimensionFit fit_dimension(const Dataset& train, const Dataset& validation,
                           Eigen::Index k, const PipelineConfig& cfg);

/// Runs fit_dimension for every k in cfg.dims and picks the surrogate with
/// the lowest final validation error; ties go to the smaller dimension.
/// Dimensions that fail entirely are dropped from the reports;
/// AllDimensionsFailed is raised when none survive.
std::pair<CompositeSurrogate, std::vector<DimensionReport>> sweep_dimensions(
    const Dataset& train, const Dataset& validation, const PipelineConfig& cfg);

/// evaluate_expansion(rfe, project(kpca, points)).
Eigen::VectorXd predict(const CompositeSurrogate& model,
                        const Eigen::MatrixXd& points);

namespace detail {
/// Index of the smallest error; the earliest entry wins ties.
std::size_t select_best_index(const std::vector<double>& errors);
} // namespace detail

} // namespace surrokit
