#include "surrokit/core.hpp"

#include <algorithm>
#include <numeric>

#include "surrokit/rng.hpp"

namespace surrokit {

void Dataset::validate() const {
    if (points.rows() != responses.size())
        throw LengthMismatch("dataset has " + std::to_string(points.rows()) +
                             " points but " + std::to_string(responses.size()) +
                             " responses");
    if (points.rows() < 1) throw InsufficientData("dataset is empty");
    if (points.cols() < 1) throw DimensionMismatch("points have dimension 0");
    if (!points.allFinite() || !responses.allFinite())
        throw NonFiniteInput("dataset contains NaN or Inf entries");
    if (!column_names.empty() &&
        static_cast<Eigen::Index>(column_names.size()) != points.cols())
        throw DimensionMismatch("column_names size does not match dimension");
}

EvalReport relative_error(const Eigen::VectorXd& y_true,
                          const Eigen::VectorXd& y_pred) {
    if (y_true.size() != y_pred.size())
        throw LengthMismatch("y_true has " + std::to_string(y_true.size()) +
                             " entries, y_pred has " +
                             std::to_string(y_pred.size()));
    if (y_true.size() < 2)
        throw InsufficientData("relative_error needs at least 2 points");
    if (!y_true.allFinite() || !y_pred.allFinite())
        throw NonFiniteInput("relative_error inputs must be finite");

    const double mean = y_true.mean();
    // Same expression shape as the numerator, so predicting the mean gives
    // a ratio of exactly 1.
    const double denom =
        (y_true - Eigen::VectorXd::Constant(y_true.size(), mean))
            .squaredNorm();
    if (denom <= 0.0)
        throw ZeroVariance("reference responses are all identical");
    const double num = (y_true - y_pred).squaredNorm();

    EvalReport report;
    report.error = num / denom;
    report.n_points = y_true.size();
    report.sample_mean = mean;
    return report;
}

SplitDataset split_dataset(const Dataset& data, Eigen::Index n_train,
                           Eigen::Index n_val, Eigen::Index n_test,
                           std::uint64_t seed) {
    data.validate();
    if (n_train < 1 || n_val < 1 || n_test < 1)
        throw InsufficientData("each split count must be at least 1");
    const Eigen::Index total = n_train + n_val + n_test;
    if (total > data.size())
        throw InsufficientData("split needs " + std::to_string(total) +
                               " points but dataset has " +
                               std::to_string(data.size()));

    std::vector<Eigen::Index> order(static_cast<std::size_t>(data.size()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    RandomStream stream(derive_seed(seed, 0x73706C6974ULL)); // "split"
    for (std::size_t i = order.size() - 1; i > 0; --i) {
        const std::size_t j =
            static_cast<std::size_t>(stream.uniform_index(i + 1));
        std::swap(order[i], order[j]);
    }

    auto take = [&](Eigen::Index offset, Eigen::Index count) {
        Dataset part;
        part.points.resize(count, data.dim());
        part.responses.resize(count);
        for (Eigen::Index i = 0; i < count; ++i) {
            const Eigen::Index src = order[static_cast<std::size_t>(offset + i)];
            part.points.row(i) = data.points.row(src);
            part.responses(i) = data.responses(src);
        }
        part.column_names = data.column_names;
        return part;
    };

    SplitDataset split;
    split.train = take(0, n_train);
    split.validation = take(n_train, n_val);
    split.test = take(n_train + n_val, n_test);
    return split;
}

} // namespace surrokit
