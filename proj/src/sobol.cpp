#include "surrokit/sobol.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "sobol_directions.hpp"

namespace surrokit {

double g_function(const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
    if (x.size() != u.size())
        throw LengthMismatch("g_function: x and u sizes differ");
    double value = 1.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (!(x(i) >= 0.0 && x(i) <= 1.0))
            throw DomainViolation("g_function input outside [0,1] at index " +
                                  std::to_string(i));
        value *= (std::abs(4.0 * x(i) - 2.0) + u(i)) / (1.0 + u(i));
    }
    return value;
}

Eigen::VectorXd reference_u(Eigen::Index dim) {
    if (dim < 7)
        throw DimTooSmall("reference u vector needs dim >= 7, got " +
                          std::to_string(dim));
    Eigen::VectorXd u = Eigen::VectorXd::Constant(dim, 500.0);
    u(0) = 1.0;
    u(1) = 2.0;
    u(2) = 5.0;
    u(3) = 20.0;
    u(4) = 50.0;
    u(5) = 100.0;
    return u;
}

namespace {

constexpr int kBits = 52; // direction integers live in a 52-bit frame

// Direction integers V[1..kBits] for one dimension (1-based index by bit).
std::vector<std::uint64_t> direction_integers(Eigen::Index dim_index) {
    std::vector<std::uint64_t> v(kBits + 1, 0);
    if (dim_index == 0) {
        for (int i = 1; i <= kBits; ++i)
            v[static_cast<std::size_t>(i)] = std::uint64_t{1} << (kBits - i);
        return v;
    }
    const detail::SobolRow& row = detail::kSobolRows[dim_index - 1];
    const int s = row.degree;
    for (int i = 1; i <= s && i <= kBits; ++i)
        v[static_cast<std::size_t>(i)] =
            static_cast<std::uint64_t>(row.m[i - 1]) << (kBits - i);
    for (int i = s + 1; i <= kBits; ++i) {
        std::uint64_t value = v[static_cast<std::size_t>(i - s)] ^
                              (v[static_cast<std::size_t>(i - s)] >> s);
        for (int k = 1; k <= s - 1; ++k)
            if ((row.a >> (s - 1 - k)) & 1U)
                value ^= v[static_cast<std::size_t>(i - k)];
        v[static_cast<std::size_t>(i)] = value;
    }
    return v;
}

} // namespace

Eigen::MatrixXd sobol_sequence(Eigen::Index dim, Eigen::Index n, long skip) {
    if (dim < 1 || dim > detail::kSobolMaxDim)
        throw UnsupportedDimension("Sobol sequence supports dimensions 1.." +
                                   std::to_string(detail::kSobolMaxDim));
    if (n < 1) throw InsufficientData("Sobol sequence needs n >= 1");
    if (skip < 0) throw ConfigError("skip must be nonnegative");

    std::vector<std::vector<std::uint64_t>> v;
    v.reserve(static_cast<std::size_t>(dim));
    for (Eigen::Index j = 0; j < dim; ++j) v.push_back(direction_integers(j));

    Eigen::MatrixXd points(n, dim);
    std::vector<std::uint64_t> state(static_cast<std::size_t>(dim), 0);
    constexpr double scale = 1.0 / static_cast<double>(std::uint64_t{1} << kBits);

    std::uint64_t index = 0;
    auto advance = [&]() {
        ++index;
        const int c =
            1 + std::countr_zero(index); // 1-based first set bit of index
        for (Eigen::Index j = 0; j < dim; ++j)
            state[static_cast<std::size_t>(j)] ^=
                v[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)];
    };

    for (long s = 0; s < skip; ++s) advance();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j)
            points(i, j) =
                static_cast<double>(state[static_cast<std::size_t>(j)]) * scale;
        advance();
    }
    return points;
}

SplitDataset make_sobol_dataset(const SobolSpec& spec) {
    if (spec.u.size() != spec.dim)
        throw LengthMismatch("u vector size must equal dim");
    if ((spec.u.array() < 0.0).any())
        throw ConfigError("u coefficients must be nonnegative");
    if (spec.n_train < 1 || spec.n_val < 1 || spec.n_test < 1)
        throw InsufficientData("each split count must be at least 1");

    const Eigen::Index total = spec.n_train + spec.n_val + spec.n_test;
    const Eigen::MatrixXd points = sobol_sequence(spec.dim, total, spec.skip);

    Eigen::VectorXd responses(total);
    for (Eigen::Index i = 0; i < total; ++i)
        responses(i) = g_function(points.row(i).transpose(), spec.u);

    auto take = [&](Eigen::Index offset, Eigen::Index count) {
        Dataset part;
        part.points = points.middleRows(offset, count);
        part.responses = responses.segment(offset, count);
        return part;
    };

    SplitDataset split;
    split.train = take(0, spec.n_train);
    split.validation = take(spec.n_train, spec.n_val);
    split.test = take(spec.n_train + spec.n_val, spec.n_test);
    return split;
}

} // namespace surrokit
