#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "surrokit/core.hpp"
#include "surrokit/pipeline.hpp"
#include "surrokit/sobol.hpp"

namespace surrokit::io {

/// CSV schema: mandatory header "x1,...,xd,y", comma delimiter, '.' decimal
/// separator, values written with up to 17 significant digits.
Dataset load_csv(const std::string& path);
void save_csv(const Dataset& data, const std::string& path);

/// Like load_csv but tolerates a missing trailing y column (prediction
/// inputs). When the last header is "y" it is parsed as the response.
struct CsvContents {
    Eigen::MatrixXd points;
    std::optional<Eigen::VectorXd> responses;
};
CsvContents load_csv_flexible(const std::string& path);

struct ModelProvenance {
    std::uint64_t seed = 0;
    std::string config_hash;
    std::string created; // ISO-8601, excluded from byte comparisons
};

/// Versioned, checksummed JSON persistence of a composite surrogate.
/// Round-trips reproduce predictions bit-exactly.
void save_model(const CompositeSurrogate& model, const std::string& path,
                const ModelProvenance& provenance);
CompositeSurrogate load_model(const std::string& path);

/// How the fit command obtains its data.
struct DatasetConfig {
    enum class Kind { Sobol, CsvTriple, CsvSingle } kind = Kind::Sobol;
    SobolSpec sobol;                      // Kind::Sobol
    std::string train_path, val_path, test_path; // Kind::CsvTriple
    std::string single_path;              // Kind::CsvSingle
    Eigen::Index n_train = 0, n_val = 0, n_test = 0;
    std::uint64_t split_seed = 0;
};

struct ExperimentConfig {
    DatasetConfig dataset;
    PipelineConfig pipeline;
    std::string model_path;  // outputs; empty = do not write
    std::string report_path;
    std::string config_hash; // hash of the raw config text
};

/// Strict parse: unknown keys anywhere raise ConfigError.
ExperimentConfig load_config(const std::string& path);

struct FitOutcome {
    CompositeSurrogate model;
    std::vector<DimensionReport> reports;
    double train_error = 0.0;
    double validation_error = 0.0;
};

/// Serializes the sweep reports plus the selection summary.
void save_report(const FitOutcome& outcome, const std::string& path);

/// Flattens a report file into the plot-ready CSV
/// (k,best_val_error,switch_iteration,iterations).
void report_to_csv(const std::string& report_path, const std::string& csv_path);

/// CLI entry point (gen-sobol | fit | predict | evaluate | report).
/// Returns 0 on success, 1 on usage/config errors, 2 on data errors.
int run_cli(int argc, const char* const* argv);

} // namespace surrokit::io
