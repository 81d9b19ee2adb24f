#include "surrokit/pso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "surrokit/parallel.hpp"
#include "surrokit/rng.hpp"

namespace surrokit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_config(const PsoConfig& cfg, Eigen::Index dim) {
    if (cfg.n_particles < 1) throw ConfigError("PSO needs at least 1 particle");
    if (cfg.inertia < 0.0 || cfg.inertia > 1.0)
        throw ConfigError("inertia must lie in [0, 1]");
    if (cfg.c_cognitive < 0.0 || cfg.c_social < 0.0 || cfg.xi1 < 0.0 ||
        cfg.xi2 < 0.0)
        throw ConfigError("acceleration constants must be nonnegative");
    if (cfg.lower.size() != dim || cfg.upper.size() != dim)
        throw DimensionMismatch("PSO bounds must match the search dimension");
    for (Eigen::Index i = 0; i < dim; ++i)
        if (!(cfg.lower(i) < cfg.upper(i)))
            throw ConfigError("each bound must satisfy low < high");
}

} // namespace

SwarmState init_swarm(const PsoConfig& cfg, Eigen::Index dim) {
    if (dim < 1) throw DimensionMismatch("PSO dimension must be >= 1");
    check_config(cfg, dim);

    const int P = cfg.n_particles;
    SwarmState state;
    state.positions.resize(P, dim);
    state.velocities = Eigen::MatrixXd::Zero(P, dim);

    RandomStream stream(derive_seed(cfg.seed, 0x696E6974ULL)); // "init"
    for (int p = 0; p < P; ++p) {
        for (Eigen::Index i = 0; i < dim; ++i) {
            double lo = std::max(cfg.lower(i), cfg.init_low);
            double hi = std::min(cfg.upper(i), cfg.init_high);
            if (!(lo < hi)) {
                lo = cfg.lower(i);
                hi = cfg.upper(i);
            }
            state.positions(p, i) = stream.uniform(lo, hi);
        }
    }
    state.pbest_positions = state.positions;
    state.pbest_losses = Eigen::VectorXd::Constant(P, kInf);
    state.gbest_position = state.positions.row(0);
    state.gbest_loss = kInf;
    state.iteration = 0;
    return state;
}

SwarmState pso_step(const SwarmState& state, const Eigen::VectorXd& losses,
                    const PsoConfig& cfg) {
    const Eigen::Index dim = state.positions.cols();
    const int P = cfg.n_particles;
    check_config(cfg, dim);
    if (losses.size() != P)
        throw LengthMismatch("need one loss per particle");
    for (Eigen::Index p = 0; p < P; ++p)
        if (std::isnan(losses(p)))
            throw NonFiniteLoss("particle " + std::to_string(p) +
                                " produced NaN loss");

    SwarmState next = state;

    // Fold the current evaluations into the bests first: the losses belong
    // to the positions the velocities are about to move away from.
    for (int p = 0; p < P; ++p) {
        if (losses(p) < next.pbest_losses(p)) {
            next.pbest_losses(p) = losses(p);
            next.pbest_positions.row(p) = state.positions.row(p);
        }
        if (next.pbest_losses(p) < next.gbest_loss) {
            next.gbest_loss = next.pbest_losses(p);
            next.gbest_position = next.pbest_positions.row(p);
        }
    }

    for (int p = 0; p < P; ++p) {
        // Substream keyed by (iteration, particle): concurrent evaluation
        // cannot reorder these draws.
        RandomStream stream(derive_seed(cfg.seed, 0x73746570ULL,
                                        static_cast<std::uint64_t>(state.iteration),
                                        static_cast<std::uint64_t>(p)));
        for (Eigen::Index i = 0; i < dim; ++i) {
            const double u1 = stream.uniform(0.0, cfg.xi1);
            const double u2 = stream.uniform(0.0, cfg.xi2);
            double v = cfg.inertia * state.velocities(p, i) +
                       cfg.c_cognitive * u1 *
                           (next.pbest_positions(p, i) - state.positions(p, i)) +
                       cfg.c_social * u2 *
                           (next.gbest_position(i) - state.positions(p, i));
            double x = state.positions(p, i) + v;
            if (x < cfg.lower(i)) {
                x = cfg.lower(i);
                v = 0.0;
            } else if (x > cfg.upper(i)) {
                x = cfg.upper(i);
                v = 0.0;
            }
            next.velocities(p, i) = v;
            next.positions(p, i) = x;
        }
    }
    next.iteration = state.iteration + 1;
    return next;
}

PsoResult pso_minimize(
    const std::function<double(const Eigen::VectorXd&)>& loss_fn,
    Eigen::Index dim, const PsoConfig& cfg, int n_threads) {
    SwarmState state = init_swarm(cfg, dim);
    const int P = cfg.n_particles;

    PsoResult result;
    result.trace.reserve(static_cast<std::size_t>(cfg.n_iterations));
    Eigen::VectorXd losses(P);

    for (int t = 0; t < cfg.n_iterations; ++t) {
        parallel_for(P, n_threads, [&](int p) {
            losses(p) = loss_fn(state.positions.row(p));
        });
        state = pso_step(state, losses, cfg);
        result.trace.push_back(state.gbest_loss);
    }

    result.best_position = state.gbest_position;
    result.best_loss = state.gbest_loss;
    return result;
}

bool convergence_check(const Eigen::MatrixXd& prev, const Eigen::MatrixXd& next,
                       double eta) {
    if (prev.rows() != next.rows() || prev.cols() != next.cols())
        throw DimensionMismatch("convergence_check shapes differ");
    if (!(eta > 0.0)) throw ConfigError("eta must be positive");
    for (Eigen::Index p = 0; p < prev.rows(); ++p)
        if ((prev.row(p) - next.row(p)).norm() > eta) return false;
    return true;
}

} // namespace surrokit
