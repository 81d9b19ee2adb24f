#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <vector>

#include "surrokit/errors.hpp"

namespace surrokit {

struct PsoConfig {
    int n_particles = 20;
    double inertia = 0.7;
    double c_cognitive = 1.0;
    double c_social = 1.0;
    double xi1 = 2.0; // upper bound of the cognitive acceleration draw
    double xi2 = 2.0; // upper bound of the social acceleration draw
    int n_iterations = 100;
    Eigen::VectorXd lower; // per-coordinate box; broadcast via make_bounds
    Eigen::VectorXd upper;
    double init_low = 0.0;  // initial positions are uniform on the
    double init_high = 1.0; // intersection of this band with the bounds
    std::uint64_t seed = 0;

    void set_bounds(Eigen::Index dim, double low, double high) {
        lower = Eigen::VectorXd::Constant(dim, low);
        upper = Eigen::VectorXd::Constant(dim, high);
    }
};

struct SwarmState {
    Eigen::MatrixXd positions;  // P x dim
    Eigen::MatrixXd velocities; // P x dim
    Eigen::MatrixXd pbest_positions;
    Eigen::VectorXd pbest_losses; // +inf until first evaluation
    Eigen::VectorXd gbest_position;
    double gbest_loss = 0.0;
    int iteration = 0;
};

struct PsoResult {
    Eigen::VectorXd best_position;
    double best_loss = 0.0;
    std::vector<double> trace; // gbest loss after each iteration
};

/// Zero velocities, positions uniform over the init band clipped to bounds,
/// bests at +inf until the first evaluation.
SwarmState init_swarm(const PsoConfig& cfg, Eigen::Index dim);

/// One update: fold `losses` (evaluated at the current positions) into the
/// personal/global bests, then apply the inertia + cognitive + social
/// velocity rule and move. Positions are clamped to the bounds with the
/// velocity zeroed on clamped coordinates. Losses may be +inf (failed
/// evaluations); NaN raises NonFiniteLoss.
SwarmState pso_step(const SwarmState& state, const Eigen::VectorXd& losses,
                    const PsoConfig& cfg);

/// Runs n_iterations rounds of evaluate-all + step. `n_threads` > 1 runs the
/// per-particle loss evaluations concurrently; results are identical to the
/// serial order.
PsoResult pso_minimize(const std::function<double(const Eigen::VectorXd&)>& loss_fn,
                       Eigen::Index dim, const PsoConfig& cfg,
                       int n_threads = 1);

/// True iff every particle moved by at most eta (Euclidean norm, non-strict).
bool convergence_check(const Eigen::MatrixXd& prev, const Eigen::MatrixXd& next,
                       double eta);

} // namespace surrokit
