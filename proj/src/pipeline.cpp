#include "surrokit/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "surrokit/parallel.hpp"
#include "surrokit/rng.hpp"
#include "surrokit/solvers.hpp"

namespace surrokit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Seed-stream tags so every consumer gets an independent substream.
constexpr std::uint64_t kTagFeatures = 0x66656174ULL;
constexpr std::uint64_t kTagPso = 0x7073776FULL;

struct PhaseSolver {
    const PipelineConfig& cfg;

    SolverConfig base() const {
        SolverConfig scfg;
        scfg.standardize = cfg.standardize;
        scfg.fit_intercept = cfg.fit_intercept;
        return scfg;
    }

    // Warm-phase fits. With an explicit lambda_ridge this is one solve; the
    // auto setting profiles a short grid so every bandwidth vector is judged
    // by the best fit it supports (the paper leaves the weight open, and a
    // single fixed value distorts the swarm's view of the landscape).
    std::vector<FitResult> warm(const Eigen::MatrixXd& A,
                                const Eigen::VectorXd& y) const {
        SolverConfig scfg = base();
        if (cfg.lambda_ridge) {
            scfg.lambda = cfg.lambda_ridge;
            return {solve_ridge(A, y, scfg)};
        }
        const double anchor =
            cfg.standardize
                ? static_cast<double>(A.rows())
                : A.squaredNorm() / static_cast<double>(A.cols());
        std::vector<double> grid;
        for (const double f : {1e-4, 1e-3, 1e-2, 1e-1, 1.0})
            grid.push_back(f * anchor);
        return solve_ridge_path(A, y, grid, scfg);
    }

    FitResult sparse(const Eigen::MatrixXd& A, const Eigen::VectorXd& y) const {
        SolverConfig scfg = base();
        scfg.lambda = cfg.lambda_lasso;
        return solve_lasso(A, y, scfg);
    }
};

// Per-axis standard deviation of the projected training coordinates;
// degenerate axes fall back to 1 so the division is always safe.
Eigen::VectorXd latent_spread(const Eigen::MatrixXd& z) {
    const double n = static_cast<double>(z.rows());
    Eigen::VectorXd scale(z.cols());
    for (Eigen::Index m = 0; m < z.cols(); ++m) {
        const double mean = z.col(m).mean();
        const double var = (z.col(m).array() - mean).square().sum() / n;
        scale(m) = var > 0.0 ? std::sqrt(var) : 1.0;
    }
    return scale;
}

Eigen::MatrixXd apply_latent_scale(const Eigen::MatrixXd& z,
                                   const Eigen::VectorXd& scale) {
    return z * scale.cwiseInverse().asDiagonal();
}

PsoConfig make_pso_config(const PipelineConfig& cfg, Eigen::Index input_dim,
                          Eigen::Index k) {
    PsoConfig pso = cfg.pso;
    pso.n_iterations = cfg.n_iterations;
    pso.seed = derive_seed(cfg.seed, kTagPso, static_cast<std::uint64_t>(k));
    if (pso.lower.size() == 0 || pso.upper.size() == 0)
        pso.set_bounds(input_dim, kThetaMin, kThetaMax);
    else if (pso.lower.size() == 1 && input_dim > 1)
        pso.set_bounds(input_dim, pso.lower(0), pso.upper(0));
    if (pso.lower.size() != input_dim || pso.upper.size() != input_dim)
        throw DimensionMismatch("PSO bounds must match the input dimension");
    return pso;
}

} // namespace

DimensionFit fit_dimension(const Dataset& train, const Dataset& validation,
                           Eigen::Index k, const PipelineConfig& cfg) {
    train.validate();
    validation.validate();
    const Eigen::Index d = train.dim();
    if (validation.dim() != d)
        throw DimensionMismatch("train/validation dimensions differ");
    if (k < 1 || k > d)
        throw DimensionMismatch("latent dimension must be in [1, d]");
    if (cfg.R < 1 || cfg.q < 1) throw ConfigError("R and q must be >= 1");

    // One fixed draw of feature weights per dimension; every particle and
    // every iteration share it so the PSO landscape stays stationary.
    const Eigen::Index q_eff = std::min(cfg.q, k);
    const FeatureWeights weights = draw_feature_weights(
        k, q_eff, cfg.R, cfg.sigma,
        derive_seed(cfg.seed, kTagFeatures, static_cast<std::uint64_t>(k)));

    const PsoConfig pso = make_pso_config(cfg, d, k);
    const double eta =
        cfg.eta.value_or(1e-2 * std::sqrt(static_cast<double>(d)));
    const int threads = cfg.threads == 0 ? default_threads() : cfg.threads;
    const PhaseSolver solver{cfg};

    auto particle_loss = [&](const Eigen::VectorXd& theta,
                             bool ridge_phase) -> double {
        try {
            KernelParams params{theta};
            const KpcaModel reduction =
                fit_kpca(train.points, params, k, cfg.center_kpca);
            if (reduction.k < k) return kInf; // k axes not supported here
            const Eigen::VectorXd scale =
                latent_spread(reduction.fitted_projections());
            const Eigen::MatrixXd z_train =
                apply_latent_scale(reduction.fitted_projections(), scale);
            const Eigen::MatrixXd z_val = apply_latent_scale(
                project(reduction, validation.points), scale);

            const Eigen::MatrixXd A = feature_matrix(z_train, weights, cfg.basis);
            const Eigen::MatrixXd A_val =
                feature_matrix(z_val, weights, cfg.basis);
            const std::vector<FitResult> fits =
                ridge_phase ? solver.warm(A, train.responses)
                            : std::vector<FitResult>{
                                  solver.sparse(A, train.responses)};

            double best = kInf;
            for (const FitResult& fit : fits) {
                const Eigen::VectorXd predicted =
                    (A_val * fit.coefficients).array() + fit.intercept;
                best = std::min(
                    best,
                    relative_error(validation.responses, predicted).error);
            }
            return best;
        } catch (const Error&) {
            return kInf;
        }
    };

    SwarmState state = init_swarm(pso, d);
    bool ridge_phase = true;
    DimensionReport report;
    report.k = k;
    Eigen::VectorXd losses(pso.n_particles);

    for (int t = 0; t < cfg.n_iterations; ++t) {
        const bool phase = ridge_phase;
        parallel_for(pso.n_particles, threads, [&](int p) {
            losses(p) = particle_loss(state.positions.row(p), phase);
        });
        if (!(losses.array() < kInf).any())
            throw DimensionFitFailed("every particle failed at k = " +
                                     std::to_string(k));

        const Eigen::MatrixXd previous = state.positions;
        state = pso_step(state, losses, pso);
        report.gbest_trace.push_back(state.gbest_loss);
        report.phases.push_back(ridge_phase ? 'r' : 'l');

        if (ridge_phase && convergence_check(previous, state.positions, eta)) {
            // One-way switch; the recorded bests were scored under the ridge
            // objective, so they are re-based before the lasso phase fills
            // them back in.
            ridge_phase = false;
            report.switch_iteration = t;
            state.pbest_losses.setConstant(kInf);
            state.gbest_loss = kInf;
        }
    }
    report.iterations_run = cfg.n_iterations;
    report.best_theta = state.gbest_position;
    report.best_val_error =
        *std::min_element(report.gbest_trace.begin(), report.gbest_trace.end());

    // Final refit: always lasso, at the best bandwidths the swarm found.
    CompositeSurrogate surrogate;
    try {
        KernelParams params{state.gbest_position};
        surrogate.kpca = fit_kpca(train.points, params, k, cfg.center_kpca);
        if (surrogate.kpca.k < k)
            throw DegenerateKernel("final bandwidths do not support k axes");
        surrogate.latent_scale =
            latent_spread(surrogate.kpca.fitted_projections());
        const Eigen::MatrixXd z_train = apply_latent_scale(
            surrogate.kpca.fitted_projections(), surrogate.latent_scale);
        const Eigen::MatrixXd A = feature_matrix(z_train, weights, cfg.basis);
        const FitResult fit = solver.sparse(A, train.responses);
        surrogate.rfe.basis = cfg.basis;
        surrogate.rfe.weights = weights;
        surrogate.rfe.coefficients = fit.coefficients;
        surrogate.rfe.intercept = fit.intercept;
        surrogate.k_star = k;
        report.final_nnz = fit.nnz;

        const Eigen::VectorXd predicted =
            evaluate_expansion(surrogate.rfe,
                               apply_latent_scale(
                                   project(surrogate.kpca, validation.points),
                                   surrogate.latent_scale));
        surrogate.validation_error =
            relative_error(validation.responses, predicted).error;
    } catch (const Error& e) {
        throw DimensionFitFailed("final refit failed at k = " +
                                 std::to_string(k) + ": " + e.what());
    }
    report.final_val_error = surrogate.validation_error;

    return DimensionFit{std::move(report), std::move(surrogate)};
}

namespace detail {

std::size_t select_best_index(const std::vector<double>& errors) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < errors.size(); ++i)
        if (errors[i] < errors[best]) best = i;
    return best;
}

} // namespace detail

std::pair<CompositeSurrogate, std::vector<DimensionReport>> sweep_dimensions(
    const Dataset& train, const Dataset& validation,
    const PipelineConfig& cfg) {
    if (cfg.dims.empty()) throw ConfigError("candidate dimension set is empty");
    if (!std::is_sorted(cfg.dims.begin(), cfg.dims.end()))
        throw ConfigError("candidate dimensions must be ascending");

    std::vector<DimensionReport> reports;
    std::vector<CompositeSurrogate> survivors;
    std::vector<double> errors;
    std::string failures;
    for (const Eigen::Index k : cfg.dims) {
        try {
            DimensionFit fit = fit_dimension(train, validation, k, cfg);
            survivors.push_back(std::move(fit.surrogate));
            errors.push_back(survivors.back().validation_error);
            reports.push_back(std::move(fit.report));
        } catch (const Error& e) {
            failures += std::string(failures.empty() ? "" : "; ") + e.what();
        }
    }
    if (survivors.empty())
        throw AllDimensionsFailed("every candidate dimension failed: " +
                                  failures);
    CompositeSurrogate best =
        std::move(survivors[detail::select_best_index(errors)]);
    return {std::move(best), std::move(reports)};
}

Eigen::VectorXd predict(const CompositeSurrogate& model,
                        const Eigen::MatrixXd& points) {
    Eigen::MatrixXd z = project(model.kpca, points);
    if (model.latent_scale.size() == z.cols())
        z = apply_latent_scale(z, model.latent_scale);
    return evaluate_expansion(model.rfe, z);
}

} // namespace surrokit
