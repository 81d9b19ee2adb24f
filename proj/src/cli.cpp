#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "surrokit/io.hpp"
#include "surrokit/solvers.hpp"

namespace surrokit::io {

namespace {

std::string iso_timestamp() {
    const std::time_t now =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buffer[32];
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
}

Eigen::VectorXd parse_u_list(const std::string& text, Eigen::Index dim) {
    std::vector<double> values;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        try {
            values.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ConfigError("cannot parse u entry '" + item + "'");
        }
    }
    if (static_cast<Eigen::Index>(values.size()) != dim)
        throw ConfigError("--u needs exactly " + std::to_string(dim) +
                          " comma-separated entries");
    Eigen::VectorXd u(dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        u(i) = values[static_cast<std::size_t>(i)];
    return u;
}

int cmd_gen_sobol(Eigen::Index dim, bool use_reference_u,
                  const std::string& u_text, Eigen::Index n_train,
                  Eigen::Index n_val, Eigen::Index n_test, long skip,
                  const std::string& prefix) {
    SobolSpec spec;
    spec.dim = dim;
    spec.n_train = n_train;
    spec.n_val = n_val;
    spec.n_test = n_test;
    spec.skip = skip;
    if (use_reference_u && !u_text.empty())
        throw ConfigError("give either --reference-u or --u, not both");
    if (use_reference_u)
        spec.u = reference_u(dim);
    else if (!u_text.empty())
        spec.u = parse_u_list(u_text, dim);
    else
        throw ConfigError("one of --reference-u or --u is required");

    const SplitDataset split = make_sobol_dataset(spec);
    save_csv(split.train, prefix + "_train.csv");
    save_csv(split.validation, prefix + "_val.csv");
    save_csv(split.test, prefix + "_test.csv");
    std::cout << "wrote " << prefix << "_{train,val,test}.csv ("
              << split.train.size() << "/" << split.validation.size() << "/"
              << split.test.size() << " rows)\n";
    return 0;
}

int cmd_fit(const std::string& config_path, std::optional<std::uint64_t> seed) {
    ExperimentConfig cfg = load_config(config_path);
    if (seed) cfg.pipeline.seed = *seed;

    Dataset train, validation;
    switch (cfg.dataset.kind) {
        case DatasetConfig::Kind::Sobol: {
            const SplitDataset split = make_sobol_dataset(cfg.dataset.sobol);
            train = split.train;
            validation = split.validation;
            break;
        }
        case DatasetConfig::Kind::CsvTriple:
            train = load_csv(cfg.dataset.train_path);
            validation = load_csv(cfg.dataset.val_path);
            break;
        case DatasetConfig::Kind::CsvSingle: {
            const Dataset whole = load_csv(cfg.dataset.single_path);
            const SplitDataset split =
                split_dataset(whole, cfg.dataset.n_train, cfg.dataset.n_val,
                              cfg.dataset.n_test, cfg.dataset.split_seed);
            train = split.train;
            validation = split.validation;
            break;
        }
    }

    FitOutcome outcome;
    auto [model, reports] = sweep_dimensions(train, validation, cfg.pipeline);
    outcome.model = std::move(model);
    outcome.reports = std::move(reports);
    outcome.validation_error = outcome.model.validation_error;
    outcome.train_error =
        relative_error(train.responses, predict(outcome.model, train.points))
            .error;

    if (!cfg.model_path.empty()) {
        ModelProvenance prov;
        prov.seed = cfg.pipeline.seed;
        prov.config_hash = cfg.config_hash;
        prov.created = iso_timestamp();
        save_model(outcome.model, cfg.model_path, prov);
    }
    if (!cfg.report_path.empty()) save_report(outcome, cfg.report_path);

    std::cout << "selected k = " << outcome.model.k_star
              << ", validation error = " << outcome.validation_error
              << ", train error = " << outcome.train_error << "\n";
    return 0;
}

int cmd_predict(const std::string& model_path, const std::string& data_path,
                const std::string& out_path) {
    const CompositeSurrogate model = load_model(model_path);
    const CsvContents contents = load_csv_flexible(data_path);
    const Eigen::VectorXd predictions = predict(model, contents.points);

    std::ostringstream out;
    out << "prediction\n";
    char buffer[64];
    for (Eigen::Index i = 0; i < predictions.size(); ++i) {
        std::snprintf(buffer, sizeof(buffer), "%.17g\n", predictions(i));
        out << buffer;
    }
    std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot open '" + out_path + "' for writing");
    file << out.str();
    std::cout << "wrote " << predictions.size() << " predictions to "
              << out_path << "\n";
    return 0;
}

int cmd_evaluate(const std::string& model_path, const std::string& data_path) {
    const CompositeSurrogate model = load_model(model_path);
    const Dataset data = load_csv(data_path);
    const Eigen::VectorXd predictions = predict(model, data.points);
    const EvalReport report = relative_error(data.responses, predictions);

    nlohmann::json out;
    out["error"] = report.error;
    out["n_points"] = report.n_points;
    out["sample_mean"] = report.sample_mean;
    std::cout << out.dump(2) << "\n";
    return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Self-supervised surrogate modelling with sparse random "
                 "features"};
    app.require_subcommand(1);

    // gen-sobol
    auto* gen = app.add_subcommand(
        "gen-sobol", "Generate benchmark CSVs from the product function");
    Eigen::Index dim = 20, n_train = 800, n_val = 1200, n_test = 2000;
    long skip = 1;
    bool use_reference_u = false;
    std::string u_text, prefix = "sobol";
    gen->add_option("--dim", dim, "Input dimension");
    gen->add_flag("--reference-u,--paper-u", use_reference_u,
                  "Use the reference coefficient vector {1,2,5,20,50,100,500,...}");
    gen->add_option("--u", u_text, "Comma-separated coefficient vector");
    gen->add_option("--train", n_train, "Training rows");
    gen->add_option("--val", n_val, "Validation rows");
    gen->add_option("--test", n_test, "Test rows");
    gen->add_option("--skip", skip, "Sequence points to discard first");
    gen->add_option("--out", prefix, "Output file prefix");

    // fit
    auto* fit = app.add_subcommand("fit", "Run the self-supervised sweep");
    std::string config_path;
    std::uint64_t seed_override = 0;
    fit->add_option("--config", config_path, "Experiment config (JSON)")
        ->required();
    fit->add_option("--seed", seed_override, "Override the config seed");

    // predict
    auto* pred = app.add_subcommand("predict", "Evaluate a saved model");
    std::string model_path, data_path, out_path = "predictions.csv";
    pred->add_option("--model", model_path, "Model file")->required();
    pred->add_option("--data", data_path, "Input CSV")->required();
    pred->add_option("--out", out_path, "Output CSV");

    // evaluate
    auto* eval = app.add_subcommand(
        "evaluate", "Report the relative error of a model on labelled data");
    std::string eval_model, eval_data;
    eval->add_option("--model", eval_model, "Model file")->required();
    eval->add_option("--data", eval_data, "Labelled CSV")->required();

    // report
    auto* rep = app.add_subcommand(
        "report", "Flatten a fit report into a plot-ready CSV");
    std::string report_path, report_csv = "report.csv";
    rep->add_option("--input", report_path, "Report JSON from fit")
        ->required();
    rep->add_option("--out", report_csv, "Output CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (gen->parsed())
            return cmd_gen_sobol(dim, use_reference_u, u_text, n_train, n_val,
                                 n_test, skip, prefix);
        if (fit->parsed())
            return cmd_fit(config_path,
                           fit->count("--seed") > 0
                               ? std::optional<std::uint64_t>(seed_override)
                               : std::nullopt);
        if (pred->parsed()) return cmd_predict(model_path, data_path, out_path);
        if (eval->parsed()) return cmd_evaluate(eval_model, eval_data);
        if (rep->parsed()) {
            report_to_csv(report_path, report_csv);
            std::cout << "wrote " << report_csv << "\n";
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

} // namespace surrokit::io
