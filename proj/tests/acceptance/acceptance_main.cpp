// Acceptance suite: one pass/fail line per criterion, exit code equal to the
// number of failures. The long benchmark reproduction (criterion 2) only runs
// with --full or --full-only.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oracles/kpca_jacobi.hpp"
#include "oracles/lasso_ista.hpp"
#include "surrokit/io.hpp"
#include "surrokit/parallel.hpp"
#include "surrokit/pipeline.hpp"
#include "surrokit/rng.hpp"
#include "surrokit/sobol.hpp"
#include "surrokit/solvers.hpp"

using namespace surrokit;

namespace {

struct Outcome {
    int id;
    bool ran = true;
    bool passed = false;
    std::string detail;
};

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

PipelineConfig benchmark_config(std::uint64_t seed, Eigen::Index R,
                                std::vector<Eigen::Index> dims) {
    PipelineConfig cfg;
    cfg.dims = std::move(dims);
    cfg.R = R;
    cfg.q = 2;
    cfg.basis = BasisKind::Cos;
    cfg.pso.n_particles = 10;
    cfg.n_iterations = 30;
    cfg.seed = seed;
    cfg.threads = 0; // hardware
    return cfg;
}

// Criterion 1: desk-scale benchmark sweep, 5 seeds, test error <= 0.05 in
// at least 4, wall time within the 30 minute budget.
Outcome criterion_1() {
    Outcome out{1};
    const double start = now_seconds();

    SobolSpec spec;
    spec.dim = 20;
    spec.u = reference_u(20);
    spec.n_train = 800;
    spec.n_val = 1200;
    spec.n_test = 2000;
    const SplitDataset data = make_sobol_dataset(spec);

    int hits = 0;
    std::ostringstream seeds_detail;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const PipelineConfig cfg = benchmark_config(seed, 2000, {4, 6, 8, 10});
        const auto [model, reports] =
            sweep_dimensions(data.train, data.validation, cfg);
        const double test_error =
            relative_error(data.test.responses,
                           predict(model, data.test.points))
                .error;
        if (test_error <= 0.05) ++hits;
        seeds_detail << " seed " << seed << ": eps=" << test_error
                     << " k*=" << model.k_star << ";";
    }
    const double elapsed = now_seconds() - start;
    out.passed = hits >= 4 && elapsed <= 1800.0;
    std::ostringstream detail;
    detail << hits << "/5 seeds under 0.05, " << elapsed << " s (budget 1800);"
           << seeds_detail.str();
    out.detail = detail.str();
    return out;
}

// Criterion 2 (optional long run): full feature budget and dimension set.
Outcome criterion_2(bool enabled) {
    Outcome out{2};
    if (!enabled) {
        out.ran = false;
        out.detail = "skipped (optional long run; pass --full to enable)";
        return out;
    }
    const double start = now_seconds();
    SobolSpec spec;
    spec.dim = 20;
    spec.u = reference_u(20);
    spec.n_train = 800;
    spec.n_val = 1200;
    spec.n_test = 2000;
    const SplitDataset data = make_sobol_dataset(spec);

    int hits = 0;
    std::ostringstream seeds_detail;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const PipelineConfig cfg =
            benchmark_config(seed, 10000, {2, 4, 6, 8, 10, 12, 14});
        const auto [model, reports] =
            sweep_dimensions(data.train, data.validation, cfg);
        const double test_error =
            relative_error(data.test.responses,
                           predict(model, data.test.points))
                .error;
        const bool k_ok =
            model.k_star == 6 || model.k_star == 8 || model.k_star == 10;
        if (test_error <= 0.02 && k_ok) ++hits;
        seeds_detail << " seed " << seed << ": eps=" << test_error
                     << " k*=" << model.k_star << ";";
    }
    const double elapsed = now_seconds() - start;
    out.passed = hits >= 3 && elapsed <= 21600.0;
    std::ostringstream detail;
    detail << hits << "/5 seeds under 0.02 with k* in {6,8,10}, " << elapsed
           << " s;" << seeds_detail.str();
    out.detail = detail.str();
    return out;
}

Outcome criterion_3() {
    Outcome out{3};
    const double start = now_seconds();
    RandomStream stream(42);
    double worst = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        Eigen::MatrixXd A(20, 50);
        Eigen::VectorXd y(20);
        for (Eigen::Index i = 0; i < A.size(); ++i)
            A(i / 50, i % 50) = stream.normal();
        for (Eigen::Index i = 0; i < 20; ++i) y(i) = stream.normal();
        const double lambda_max =
            2.0 * (A.transpose() * y).cwiseAbs().maxCoeff();
        const double factors[3] = {0.01, 0.1, 1.0};
        const double lambda = factors[rep % 3] * lambda_max;

        SolverConfig cfg;
        cfg.lambda = lambda;
        cfg.standardize = false;
        cfg.fit_intercept = false;
        cfg.tol = 1e-12;
        cfg.max_iter = 20000;
        const FitResult fit = solve_lasso(A, y, cfg);
        const auto oracle = oracles::lasso_proximal_oracle(A, y, lambda);
        worst = std::max(worst, std::abs(fit.objective - oracle.objective));
    }
    const double elapsed = now_seconds() - start;
    out.passed = worst < 1e-6 && elapsed < 5.0;
    std::ostringstream detail;
    detail << "max |objective gap| = " << worst << ", " << elapsed << " s";
    out.detail = detail.str();
    return out;
}

Outcome criterion_4() {
    Outcome out{4};
    const double start = now_seconds();
    RandomStream stream(1001);
    double worst = 0.0;
    for (int fixture = 0; fixture < 20; ++fixture) {
        const Eigen::Index n =
            5 + static_cast<Eigen::Index>(stream.uniform_index(46));
        const Eigen::Index d =
            2 + static_cast<Eigen::Index>(stream.uniform_index(5));
        const Eigen::Index k =
            1 + static_cast<Eigen::Index>(stream.uniform_index(
                    static_cast<std::uint64_t>(std::min<Eigen::Index>(5, n - 1))));
        Eigen::MatrixXd pts(n, d);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < d; ++j) pts(i, j) = stream.normal();
        Eigen::VectorXd theta(d);
        for (Eigen::Index j = 0; j < d; ++j)
            theta(j) = stream.uniform(0.5, 3.0);
        Eigen::MatrixXd queries(7, d);
        for (Eigen::Index i = 0; i < 7; ++i)
            for (Eigen::Index j = 0; j < d; ++j)
                queries(i, j) = stream.normal();

        const KpcaModel model = fit_kpca(pts, KernelParams{theta}, k);
        const auto oracle = oracles::dense_kpca_fit(pts, theta, k);
        const Eigen::MatrixXd mine = project(model, queries);
        const Eigen::MatrixXd ref =
            oracles::dense_kpca_project(pts, theta, oracle, queries);
        for (Eigen::Index m = 0; m < k; ++m) {
            const double direct =
                (mine.col(m) - ref.col(m)).cwiseAbs().maxCoeff();
            const double flipped =
                (mine.col(m) + ref.col(m)).cwiseAbs().maxCoeff();
            worst = std::max(worst, std::min(direct, flipped));
        }
    }
    const double elapsed = now_seconds() - start;
    out.passed = worst < 1e-8 && elapsed < 5.0;
    std::ostringstream detail;
    detail << "max per-axis deviation = " << worst << ", " << elapsed << " s";
    out.detail = detail.str();
    return out;
}

Outcome criterion_5() {
    Outcome out{5};
    const double start = now_seconds();
    auto sphere = [](const Eigen::VectorXd& x) { return x.squaredNorm(); };
    auto ackley = [](const Eigen::VectorXd& x) {
        const double n = static_cast<double>(x.size());
        const double rms = std::sqrt(x.squaredNorm() / n);
        const double mean_cos =
            x.unaryExpr([](double v) { return std::cos(2.0 * M_PI * v); })
                .mean();
        return -20.0 * std::exp(-0.2 * rms) - std::exp(mean_cos) + 20.0 +
               std::exp(1.0);
    };

    int sphere_hits = 0, ackley_hits = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        PsoConfig cfg;
        cfg.set_bounds(5, -5.0, 5.0);
        cfg.n_particles = 20;
        cfg.n_iterations = 100;
        cfg.seed = seed;
        cfg.init_low = -5.0;
        cfg.init_high = 5.0;
        if (pso_minimize(sphere, 5, cfg).best_loss < 1e-2) ++sphere_hits;

        PsoConfig ack;
        ack.set_bounds(2, -32.768, 32.768);
        ack.n_particles = 30;
        ack.n_iterations = 200;
        ack.seed = seed;
        ack.init_low = -32.768;
        ack.init_high = 32.768;
        if (pso_minimize(ackley, 2, ack).best_loss < 0.1) ++ackley_hits;
    }
    const double elapsed = now_seconds() - start;
    out.passed = sphere_hits >= 9 && ackley_hits >= 9 && elapsed < 30.0;
    std::ostringstream detail;
    detail << "sphere " << sphere_hits << "/10, ackley " << ackley_hits
           << "/10, " << elapsed << " s";
    out.detail = detail.str();
    return out;
}

Outcome criterion_6() {
    Outcome out{6};
    const double start = now_seconds();

    SobolSpec spec;
    spec.dim = 20;
    spec.u = reference_u(20);
    spec.n_train = 50000;
    spec.n_val = 25000;
    spec.n_test = 25000;
    const SplitDataset split = make_sobol_dataset(spec);
    Eigen::VectorXd all(100000);
    all << split.train.responses, split.validation.responses,
        split.test.responses;
    const double mean = all.mean();
    const double sd = std::sqrt((all.array() - mean).square().sum() /
                                (all.size() - 1.0));
    const double se = sd / std::sqrt(static_cast<double>(all.size()));
    const bool mean_ok = std::abs(mean - 1.0) <= 3.0 * se;

    bool symmetric = true;
    RandomStream stream(17);
    const Eigen::VectorXd u = reference_u(20);
    for (int rep = 0; rep < 1000 && symmetric; ++rep) {
        Eigen::VectorXd x(20);
        for (Eigen::Index i = 0; i < 20; ++i)
            x(i) = static_cast<double>(stream.uniform_index(1 << 26)) /
                   static_cast<double>(1 << 26);
        const double base = g_function(x, u);
        for (Eigen::Index i = 0; i < 20; ++i) {
            Eigen::VectorXd flipped = x;
            flipped(i) = 1.0 - x(i);
            if (g_function(flipped, u) != base) symmetric = false;
        }
    }
    const double elapsed = now_seconds() - start;
    out.passed = mean_ok && symmetric && elapsed < 10.0;
    std::ostringstream detail;
    detail << "mean = " << mean << " (3 SE band " << 3.0 * se
           << "), symmetry " << (symmetric ? "exact" : "violated") << ", "
           << elapsed << " s";
    out.detail = detail.str();
    return out;
}

Outcome criterion_7() {
    Outcome out{7};
    RandomStream stream(7);
    bool ok = true;
    for (int rep = 0; rep < 100; ++rep) {
        Eigen::VectorXd y(9);
        for (Eigen::Index i = 0; i < 9; ++i) y(i) = stream.normal(1.0, 3.0);
        if (relative_error(y, y).error != 0.0) ok = false;
        const Eigen::VectorXd mean_pred =
            Eigen::VectorXd::Constant(9, y.mean());
        if (relative_error(y, mean_pred).error != 1.0) ok = false;
    }
    Eigen::VectorXd a(3), b(3);
    a << 1, 2, 3;
    b << 1, 2, 4;
    const bool hand_ok = relative_error(a, b).error == 0.5;
    out.passed = ok && hand_ok;
    out.detail = std::string("identities ") + (ok ? "exact" : "violated") +
                 ", hand case " + (hand_ok ? "0.5" : "wrong");
    return out;
}

Outcome criterion_8() {
    Outcome out{8};
    namespace fs = std::filesystem;
    const fs::path dir =
        fs::temp_directory_path() / "surrokit_acceptance_determinism";
    fs::create_directories(dir);

    SobolSpec spec;
    spec.dim = 8;
    spec.u = reference_u(8);
    spec.n_train = 60;
    spec.n_val = 40;
    spec.n_test = 40;
    const SplitDataset data = make_sobol_dataset(spec);

    PipelineConfig cfg;
    cfg.dims = {2, 3};
    cfg.R = 120;
    cfg.q = 2;
    cfg.pso.n_particles = 5;
    cfg.n_iterations = 6;
    cfg.seed = 4242;
    cfg.threads = 0;

    auto fit_and_save = [&](const std::string& model_path,
                            const std::string& report_path,
                            const std::string& stamp) {
        const auto [model, reports] =
            sweep_dimensions(data.train, data.validation, cfg);
        io::FitOutcome outcome;
        outcome.model = model;
        outcome.reports = reports;
        outcome.validation_error = model.validation_error;
        outcome.train_error =
            relative_error(data.train.responses,
                           predict(model, data.train.points))
                .error;
        io::ModelProvenance prov;
        prov.seed = cfg.seed;
        prov.config_hash = "acceptance";
        prov.created = stamp; // deliberately different across runs
        io::save_model(outcome.model, model_path, prov);
        io::save_report(outcome, report_path);
    };

    fit_and_save((dir / "model_a.json").string(),
                 (dir / "report_a.json").string(), "2026-01-01T00:00:00Z");
    fit_and_save((dir / "model_b.json").string(),
                 (dir / "report_b.json").string(), "2026-12-31T23:59:59Z");

    auto read = [](const fs::path& p) {
        std::ifstream in(p);
        return std::string((std::istreambuf_iterator<char>(in)),
                           std::istreambuf_iterator<char>());
    };
    auto strip = [&](const fs::path& p) {
        nlohmann::json obj = nlohmann::json::parse(read(p));
        obj.erase("provenance");
        return obj.dump();
    };
    const bool model_equal =
        strip(dir / "model_a.json") == strip(dir / "model_b.json");
    const bool report_equal =
        read(dir / "report_a.json") == read(dir / "report_b.json");
    fs::remove_all(dir);

    out.passed = model_equal && report_equal;
    out.detail = std::string("model files ") +
                 (model_equal ? "identical" : "differ") + ", reports " +
                 (report_equal ? "identical" : "differ") +
                 " (provenance excluded)";
    return out;
}

Outcome criterion_9() {
    Outcome out{9};
    SobolSpec spec;
    spec.dim = 8;
    spec.u = reference_u(8);
    spec.n_train = 80;
    spec.n_val = 50;
    spec.n_test = 40;
    const SplitDataset data = make_sobol_dataset(spec);

    PipelineConfig cfg;
    cfg.dims = {3};
    cfg.R = 150;
    cfg.q = 2;
    cfg.pso.n_particles = 6;
    cfg.n_iterations = 15;
    cfg.seed = 7;
    const DimensionFit fit =
        fit_dimension(data.train, data.validation, 3, cfg);

    int flips = 0;
    for (std::size_t t = 1; t < fit.report.phases.size(); ++t) {
        if (fit.report.phases[t] != fit.report.phases[t - 1]) ++flips;
        if (fit.report.phases[t - 1] == 'l')
            flips += fit.report.phases[t] == 'r' ? 100 : 0; // one-way breach
    }
    const bool one_way = flips <= 1;
    // The final surrogate must come from the sparse solver: with 150
    // features on 80 points and the auto lambda, exact zeros must appear.
    const bool lasso_final = fit.report.final_nnz < cfg.R;
    const bool switch_recorded = fit.report.switch_iteration.has_value();

    out.passed = one_way && lasso_final;
    std::ostringstream detail;
    detail << "phase flips = " << flips << ", switch "
           << (switch_recorded
                   ? "at iteration " + std::to_string(*fit.report.switch_iteration)
                   : std::string("never fired"))
           << ", final nnz = " << fit.report.final_nnz << "/" << cfg.R;
    out.detail = detail.str();
    return out;
}

} // namespace

int main(int argc, char** argv) {
    bool full = false;
    bool full_only = false;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--full") == 0) full = true;
        if (std::strcmp(argv[i], "--full-only") == 0) full_only = true;
    }

    std::vector<Outcome> outcomes;
    if (full_only) {
        outcomes.push_back(criterion_2(true));
    } else {
        outcomes.push_back(criterion_3());
        outcomes.push_back(criterion_4());
        outcomes.push_back(criterion_5());
        outcomes.push_back(criterion_6());
        outcomes.push_back(criterion_7());
        outcomes.push_back(criterion_8());
        outcomes.push_back(criterion_9());
        outcomes.push_back(criterion_1());
        outcomes.push_back(criterion_2(full));
    }

    std::sort(outcomes.begin(), outcomes.end(),
              [](const Outcome& a, const Outcome& b) { return a.id < b.id; });

    int failures = 0;
    for (const Outcome& outcome : outcomes) {
        const char* status = !outcome.ran ? "SKIP"
                             : outcome.passed ? "PASS"
                                              : "FAIL";
        std::printf("%s criterion %d: %s\n", status, outcome.id,
                    outcome.detail.c_str());
        if (outcome.ran && !outcome.passed) ++failures;
    }
    std::printf("%d criteria failed\n", failures);
    return failures;
}
