#include "surrokit/features.hpp"

#include <algorithm>
#include <numeric>

#include "surrokit/rng.hpp"
#include "surrokit/simd.hpp"

namespace surrokit {

const char* basis_name(BasisKind kind) {
    switch (kind) {
        case BasisKind::Cos: return "cos";
        case BasisKind::Sin: return "sin";
        case BasisKind::Relu: return "relu";
    }
    return "cos";
}

BasisKind basis_from_name(const std::string& name) {
    if (name == "cos") return BasisKind::Cos;
    if (name == "sin") return BasisKind::Sin;
    if (name == "relu") return BasisKind::Relu;
    throw ConfigError("unknown basis '" + name + "' (expected cos|sin|relu)");
}

Eigen::VectorXd FeatureWeights::dense_weight(Eigen::Index j) const {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(dim);
    const auto& support = supports[static_cast<std::size_t>(j)];
    const auto& value = values[static_cast<std::size_t>(j)];
    for (std::size_t u = 0; u < support.size(); ++u)
        w(support[u]) = value[u];
    return w;
}

FeatureWeights draw_feature_weights(Eigen::Index dim, Eigen::Index q,
                                    Eigen::Index R, double sigma,
                                    std::uint64_t seed) {
    if (dim < 1) throw DimensionMismatch("feature weights need dim >= 1");
    if (q < 1) throw DimensionMismatch("sparsity order q must be >= 1");
    if (R < 1) throw DimensionMismatch("feature count R must be >= 1");
    if (!(sigma > 0.0)) throw NonFiniteInput("sigma must be positive");

    FeatureWeights fw;
    fw.dim = dim;
    fw.q = q;
    fw.sigma = sigma;
    fw.seed = seed;
    const Eigen::Index s = std::min(q, dim);
    fw.supports.resize(static_cast<std::size_t>(R));
    fw.values.resize(static_cast<std::size_t>(R));

    RandomStream stream(derive_seed(seed, 0x66656174ULL)); // "feat"
    std::vector<Eigen::Index> pool(static_cast<std::size_t>(dim));
    for (Eigen::Index j = 0; j < R; ++j) {
        // Partial Fisher-Yates: the first s entries are a uniform subset.
        std::iota(pool.begin(), pool.end(), Eigen::Index{0});
        for (Eigen::Index u = 0; u < s; ++u) {
            const std::size_t pick =
                static_cast<std::size_t>(u) +
                static_cast<std::size_t>(stream.uniform_index(
                    static_cast<std::uint64_t>(dim - u)));
            std::swap(pool[static_cast<std::size_t>(u)], pool[pick]);
        }
        auto& support = fw.supports[static_cast<std::size_t>(j)];
        support.assign(pool.begin(), pool.begin() + s);
        std::sort(support.begin(), support.end());
        auto& value = fw.values[static_cast<std::size_t>(j)];
        value.resize(static_cast<std::size_t>(s));
        for (Eigen::Index u = 0; u < s; ++u)
            value[static_cast<std::size_t>(u)] = stream.normal(0.0, sigma);
    }
    return fw;
}

namespace {

void apply_basis(BasisKind basis, const double* in, double* out,
                 std::size_t n) {
    switch (basis) {
        case BasisKind::Cos: simd::vcos(in, out, n); break;
        case BasisKind::Sin: simd::vsin(in, out, n); break;
        case BasisKind::Relu: simd::vrelu(in, out, n); break;
    }
}

// Fills A (m x R, column-major) for the given block of points.
void fill_feature_block(const Eigen::MatrixXd& points,
                        const FeatureWeights& weights, BasisKind basis,
                        Eigen::MatrixXd& A) {
    const Eigen::Index m = points.rows();
    const Eigen::Index R = weights.count();
    for (Eigen::Index j = 0; j < R; ++j) {
        const auto& support = weights.supports[static_cast<std::size_t>(j)];
        const auto& value = weights.values[static_cast<std::size_t>(j)];
        double* col = A.col(j).data();
        simd::scale_copy(value[0], points.col(support[0]).data(), col,
                         static_cast<std::size_t>(m));
        for (std::size_t u = 1; u < support.size(); ++u)
            simd::axpy(value[u], points.col(support[u]).data(), col,
                       static_cast<std::size_t>(m));
        apply_basis(basis, col, col, static_cast<std::size_t>(m));
    }
}

} // namespace

Eigen::MatrixXd feature_matrix(const Eigen::MatrixXd& points,
                               const FeatureWeights& weights,
                               BasisKind basis) {
    if (points.cols() != weights.dim)
        throw DimensionMismatch("points have dimension " +
                                std::to_string(points.cols()) +
                                " but weights expect " +
                                std::to_string(weights.dim));
    Eigen::MatrixXd A(points.rows(), weights.count());
    fill_feature_block(points, weights, basis, A);
    return A;
}

Eigen::VectorXd evaluate_expansion(const RandomFeatureModel& model,
                                   const Eigen::MatrixXd& points) {
    if (points.cols() != model.weights.dim)
        throw DimensionMismatch("points have dimension " +
                                std::to_string(points.cols()) +
                                " but model expects " +
                                std::to_string(model.weights.dim));
    if (model.coefficients.size() != model.weights.count())
        throw DimensionMismatch("coefficient count does not match weights");

    const Eigen::Index m = points.rows();
    const Eigen::Index block = 512;
    Eigen::VectorXd y(m);
    Eigen::MatrixXd A;
    for (Eigen::Index start = 0; start < m; start += block) {
        const Eigen::Index rows = std::min(block, m - start);
        A.resize(rows, model.weights.count());
        const Eigen::MatrixXd chunk = points.middleRows(start, rows);
        fill_feature_block(chunk, model.weights, model.basis, A);
        y.segment(start, rows) =
            (A * model.coefficients).array() + model.intercept;
    }
    return y;
}

} // namespace surrokit
