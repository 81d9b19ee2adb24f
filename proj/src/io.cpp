#include "surrokit/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace surrokit::io {

using nlohmann::json;

namespace {

constexpr int kModelFormatVersion = 1;

std::string format_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << contents;
    if (!out) throw IoError("failed writing '" + path + "'");
}

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t hash = 1469598103934665603ULL;
    for (const unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    return hash;
}

std::string hex64(std::uint64_t value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%016llx",
                  static_cast<unsigned long long>(value));
    return buffer;
}

double parse_cell(const std::string& cell, long row, long col) {
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    // Tolerate surrounding spaces but nothing else.
    while (begin < end && *begin == ' ') ++begin;
    while (end > begin && *(end - 1) == ' ') --end;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw ParseError("non-numeric cell '" + cell + "' at row " +
                             std::to_string(row) + ", column " +
                             std::to_string(col),
                         row, col);
    if (!std::isfinite(value))
        throw ParseError("non-finite value at row " + std::to_string(row) +
                             ", column " + std::to_string(col),
                         row, col);
    return value;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return cells;
}

CsvContents parse_csv(const std::string& path, bool require_response) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");

    std::string line;
    if (!std::getline(in, line))
        throw ParseError("empty file '" + path + "'", 0, 0);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> header = split_line(line);
    if (header.empty())
        throw ParseError("missing header in '" + path + "'", 0, 0);

    const bool has_response = header.back() == "y";
    if (require_response && !has_response)
        throw MissingResponseColumn("last column of '" + path +
                                    "' must be named 'y'");
    const std::size_t d = header.size() - (has_response ? 1 : 0);
    if (d == 0) throw ParseError("no feature columns in '" + path + "'", 0, 0);

    std::vector<std::vector<double>> rows;
    long row_index = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++row_index;
        const std::vector<std::string> cells = split_line(line);
        if (cells.size() != header.size())
            throw ParseError("row " + std::to_string(row_index) + " has " +
                                 std::to_string(cells.size()) +
                                 " cells, expected " +
                                 std::to_string(header.size()),
                             row_index, static_cast<long>(cells.size()));
        std::vector<double> values(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c)
            values[c] = parse_cell(cells[c], row_index,
                                   static_cast<long>(c + 1));
        rows.push_back(std::move(values));
    }
    if (rows.empty())
        throw ParseError("no data rows in '" + path + "'", 0, 0);

    CsvContents contents;
    contents.points.resize(static_cast<Eigen::Index>(rows.size()),
                           static_cast<Eigen::Index>(d));
    if (has_response)
        contents.responses.emplace(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t c = 0; c < d; ++c)
            contents.points(static_cast<Eigen::Index>(i),
                            static_cast<Eigen::Index>(c)) = rows[i][c];
        if (has_response)
            (*contents.responses)(static_cast<Eigen::Index>(i)) = rows[i][d];
    }
    return contents;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

Eigen::VectorXd vector_from_json(const json& arr) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
    Eigen::Index i = 0;
    for (const auto& item : arr) v(i++) = item.get<double>();
    return v;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& rows) {
    const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
    if (n == 0) return Eigen::MatrixXd(0, 0);
    const Eigen::Index d = static_cast<Eigen::Index>(rows.front().size());
    Eigen::MatrixXd m(n, d);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        if (static_cast<Eigen::Index>(row.size()) != d)
            throw CorruptFile("ragged matrix rows in model file");
        Eigen::Index j = 0;
        for (const auto& item : row) m(i, j++) = item.get<double>();
        ++i;
    }
    return m;
}

void reject_unknown_keys(const json& obj, const std::string& where,
                         std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* name : allowed)
            if (key == name) {
                ok = true;
                break;
            }
        if (!ok)
            throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

} // namespace

Dataset load_csv(const std::string& path) {
    CsvContents contents = parse_csv(path, /*require_response=*/true);
    Dataset data;
    data.points = std::move(contents.points);
    data.responses = std::move(*contents.responses);
    data.validate();
    return data;
}

CsvContents load_csv_flexible(const std::string& path) {
    return parse_csv(path, /*require_response=*/false);
}

void save_csv(const Dataset& data, const std::string& path) {
    data.validate();
    std::ostringstream out;
    for (Eigen::Index j = 0; j < data.dim(); ++j)
        out << 'x' << (j + 1) << ',';
    out << "y\n";
    for (Eigen::Index i = 0; i < data.size(); ++i) {
        for (Eigen::Index j = 0; j < data.dim(); ++j)
            out << format_double(data.points(i, j)) << ',';
        out << format_double(data.responses(i)) << '\n';
    }
    write_file(path, out.str());
}

void save_model(const CompositeSurrogate& model, const std::string& path,
                const ModelProvenance& provenance) {
    json payload;
    payload["k_star"] = model.k_star;
    payload["validation_error"] = model.validation_error;
    payload["latent_scale"] = vector_to_json(model.latent_scale);

    json kpca;
    kpca["theta"] = vector_to_json(model.kpca.theta);
    kpca["k"] = model.kpca.k;
    kpca["alphas"] = matrix_to_json(model.kpca.alphas);
    kpca["eigenvalues"] = vector_to_json(model.kpca.eigenvalues);
    kpca["row_means"] = vector_to_json(model.kpca.row_means);
    kpca["grand_mean"] = model.kpca.grand_mean;
    kpca["centered"] = model.kpca.centered;
    kpca["training_points"] = matrix_to_json(model.kpca.training_points);
    payload["kpca"] = std::move(kpca);

    json rfe;
    rfe["basis"] = basis_name(model.rfe.basis);
    rfe["intercept"] = model.rfe.intercept;
    rfe["coefficients"] = vector_to_json(model.rfe.coefficients);
    json weights;
    weights["dim"] = model.rfe.weights.dim;
    weights["q"] = model.rfe.weights.q;
    weights["sigma"] = model.rfe.weights.sigma;
    weights["seed"] = model.rfe.weights.seed;
    weights["supports"] = model.rfe.weights.supports;
    weights["values"] = model.rfe.weights.values;
    rfe["weights"] = std::move(weights);
    payload["rfe"] = std::move(rfe);

    json file;
    file["format_version"] = kModelFormatVersion;
    file["checksum"] = hex64(fnv1a64(payload.dump()));
    file["payload"] = std::move(payload);
    json prov;
    prov["seed"] = provenance.seed;
    prov["config_hash"] = provenance.config_hash;
    prov["created"] = provenance.created;
    file["provenance"] = std::move(prov);

    write_file(path, file.dump(2) + "\n");
}

CompositeSurrogate load_model(const std::string& path) {
    json file;
    try {
        file = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw CorruptFile("model file '" + path + "' is not valid JSON: " +
                          e.what());
    }
    try {
        if (!file.contains("format_version") ||
            file["format_version"].get<int>() != kModelFormatVersion)
            throw VersionMismatch(
                "model file '" + path + "' has format version " +
                (file.contains("format_version")
                     ? file["format_version"].dump()
                     : std::string("<missing>")) +
                ", expected " + std::to_string(kModelFormatVersion));
        if (!file.contains("payload") || !file.contains("checksum"))
            throw CorruptFile("model file '" + path + "' is incomplete");
        const json& payload = file["payload"];
        if (hex64(fnv1a64(payload.dump())) !=
            file["checksum"].get<std::string>())
            throw CorruptFile("model file '" + path +
                              "' failed its checksum");

        CompositeSurrogate model;
        model.k_star = payload.at("k_star").get<Eigen::Index>();
        model.validation_error = payload.at("validation_error").get<double>();
        model.latent_scale = vector_from_json(payload.at("latent_scale"));

        const json& kpca = payload.at("kpca");
        model.kpca.theta = vector_from_json(kpca.at("theta"));
        model.kpca.k = kpca.at("k").get<Eigen::Index>();
        model.kpca.alphas = matrix_from_json(kpca.at("alphas"));
        model.kpca.eigenvalues = vector_from_json(kpca.at("eigenvalues"));
        model.kpca.row_means = vector_from_json(kpca.at("row_means"));
        model.kpca.grand_mean = kpca.at("grand_mean").get<double>();
        model.kpca.centered = kpca.at("centered").get<bool>();
        model.kpca.training_points =
            matrix_from_json(kpca.at("training_points"));

        const json& rfe = payload.at("rfe");
        model.rfe.basis = basis_from_name(rfe.at("basis").get<std::string>());
        model.rfe.intercept = rfe.at("intercept").get<double>();
        model.rfe.coefficients = vector_from_json(rfe.at("coefficients"));
        const json& weights = rfe.at("weights");
        model.rfe.weights.dim = weights.at("dim").get<Eigen::Index>();
        model.rfe.weights.q = weights.at("q").get<Eigen::Index>();
        model.rfe.weights.sigma = weights.at("sigma").get<double>();
        model.rfe.weights.seed = weights.at("seed").get<std::uint64_t>();
        model.rfe.weights.supports =
            weights.at("supports")
                .get<std::vector<std::vector<Eigen::Index>>>();
        model.rfe.weights.values =
            weights.at("values").get<std::vector<std::vector<double>>>();
        return model;
    } catch (const json::exception& e) {
        throw CorruptFile("model file '" + path + "' is malformed: " +
                          e.what());
    }
}

namespace {

std::optional<double> optional_lambda(const json& obj, const char* key) {
    if (!obj.contains(key)) return std::nullopt;
    if (obj[key].is_string()) {
        if (obj[key].get<std::string>() == "auto") return std::nullopt;
        throw ConfigError(std::string(key) + " must be a number or \"auto\"");
    }
    return obj[key].get<double>();
}

DatasetConfig parse_dataset_config(const json& obj) {
    DatasetConfig ds;
    const std::string kind = obj.at("kind").get<std::string>();
    if (kind == "sobol") {
        reject_unknown_keys(obj, "dataset",
                            {"kind", "dim", "u", "reference_u", "train", "val",
                             "test", "skip"});
        ds.kind = DatasetConfig::Kind::Sobol;
        ds.sobol.dim = obj.at("dim").get<Eigen::Index>();
        if (obj.value("reference_u", false) && obj.contains("u"))
            throw ConfigError("give either \"u\" or \"reference_u\", not both");
        if (obj.value("reference_u", false))
            ds.sobol.u = reference_u(ds.sobol.dim);
        else if (obj.contains("u"))
            ds.sobol.u = vector_from_json(obj["u"]);
        else
            throw ConfigError("sobol dataset needs \"u\" or \"reference_u\"");
        ds.sobol.n_train = obj.at("train").get<Eigen::Index>();
        ds.sobol.n_val = obj.at("val").get<Eigen::Index>();
        ds.sobol.n_test = obj.at("test").get<Eigen::Index>();
        ds.sobol.skip = obj.value("skip", 1L);
    } else if (kind == "csv") {
        reject_unknown_keys(obj, "dataset",
                            {"kind", "train", "validation", "test"});
        ds.kind = DatasetConfig::Kind::CsvTriple;
        ds.train_path = obj.at("train").get<std::string>();
        ds.val_path = obj.at("validation").get<std::string>();
        ds.test_path = obj.value("test", std::string{});
    } else if (kind == "csv_single") {
        reject_unknown_keys(
            obj, "dataset",
            {"kind", "path", "train", "val", "test", "split_seed"});
        ds.kind = DatasetConfig::Kind::CsvSingle;
        ds.single_path = obj.at("path").get<std::string>();
        ds.n_train = obj.at("train").get<Eigen::Index>();
        ds.n_val = obj.at("val").get<Eigen::Index>();
        ds.n_test = obj.at("test").get<Eigen::Index>();
        ds.split_seed = obj.value("split_seed", std::uint64_t{0});
    } else {
        throw ConfigError("unknown dataset kind '" + kind + "'");
    }
    return ds;
}

} // namespace

ExperimentConfig load_config(const std::string& path) {
    const std::string text = read_file(path);
    json obj;
    try {
        obj = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError("config '" + path + "' is not valid JSON: " +
                          e.what());
    }
    try {
        reject_unknown_keys(obj, "config root",
                            {"dataset", "pipeline", "pso", "output"});
        ExperimentConfig cfg;
        cfg.config_hash = hex64(fnv1a64(text));
        cfg.dataset = parse_dataset_config(obj.at("dataset"));

        const json& pl = obj.at("pipeline");
        reject_unknown_keys(pl, "pipeline",
                            {"dims", "R", "q", "sigma", "basis", "eta",
                             "lambda_ridge", "lambda_lasso", "iterations",
                             "seed", "threads", "center_kpca", "fit_intercept",
                             "standardize"});
        cfg.pipeline.dims.clear();
        for (const auto& item : pl.at("dims"))
            cfg.pipeline.dims.push_back(item.get<Eigen::Index>());
        cfg.pipeline.R = pl.value("R", Eigen::Index{2000});
        cfg.pipeline.q = pl.value("q", Eigen::Index{2});
        cfg.pipeline.sigma = pl.value("sigma", 1.0);
        cfg.pipeline.basis =
            basis_from_name(pl.value("basis", std::string("cos")));
        cfg.pipeline.eta = optional_lambda(pl, "eta");
        cfg.pipeline.lambda_ridge = optional_lambda(pl, "lambda_ridge");
        cfg.pipeline.lambda_lasso = optional_lambda(pl, "lambda_lasso");
        cfg.pipeline.n_iterations = pl.value("iterations", 30);
        cfg.pipeline.seed = pl.value("seed", std::uint64_t{0});
        cfg.pipeline.threads = pl.value("threads", 0);
        cfg.pipeline.center_kpca = pl.value("center_kpca", true);
        cfg.pipeline.fit_intercept = pl.value("fit_intercept", true);
        cfg.pipeline.standardize = pl.value("standardize", true);

        if (obj.contains("pso")) {
            const json& pso = obj["pso"];
            reject_unknown_keys(pso, "pso",
                                {"particles", "inertia", "c_cognitive",
                                 "c_social", "xi1", "xi2", "bounds_low",
                                 "bounds_high", "init_low", "init_high"});
            cfg.pipeline.pso.n_particles = pso.value("particles", 20);
            cfg.pipeline.pso.inertia = pso.value("inertia", 0.7);
            cfg.pipeline.pso.c_cognitive = pso.value("c_cognitive", 1.0);
            cfg.pipeline.pso.c_social = pso.value("c_social", 1.0);
            cfg.pipeline.pso.xi1 = pso.value("xi1", 2.0);
            cfg.pipeline.pso.xi2 = pso.value("xi2", 2.0);
            cfg.pipeline.pso.init_low = pso.value("init_low", 0.0);
            cfg.pipeline.pso.init_high = pso.value("init_high", 1.0);
            if (pso.contains("bounds_low") != pso.contains("bounds_high"))
                throw ConfigError(
                    "bounds_low and bounds_high must be given together");
            if (pso.contains("bounds_low")) {
                // Expanded per-coordinate once the input dimension is known.
                cfg.pipeline.pso.lower =
                    Eigen::VectorXd::Constant(1, pso["bounds_low"].get<double>());
                cfg.pipeline.pso.upper = Eigen::VectorXd::Constant(
                    1, pso["bounds_high"].get<double>());
            }
        }

        if (obj.contains("output")) {
            const json& out = obj["output"];
            reject_unknown_keys(out, "output", {"model", "report"});
            cfg.model_path = out.value("model", std::string{});
            cfg.report_path = out.value("report", std::string{});
        }
        return cfg;
    } catch (const json::exception& e) {
        throw ConfigError("config '" + path + "' is malformed: " + e.what());
    }
}

void save_report(const FitOutcome& outcome, const std::string& path) {
    json reports = json::array();
    for (const DimensionReport& r : outcome.reports) {
        json entry;
        entry["k"] = r.k;
        entry["best_theta"] = vector_to_json(r.best_theta);
        entry["best_val_error"] = r.best_val_error;
        entry["final_val_error"] = r.final_val_error;
        entry["final_nnz"] = r.final_nnz;
        entry["iterations"] = r.iterations_run;
        if (r.switch_iteration)
            entry["switch_iteration"] = *r.switch_iteration;
        else
            entry["switch_iteration"] = nullptr;
        entry["gbest_trace"] = r.gbest_trace;
        entry["phases"] = std::string(r.phases.begin(), r.phases.end());
        reports.push_back(std::move(entry));
    }
    json file;
    file["reports"] = std::move(reports);
    file["selected_k"] = outcome.model.k_star;
    file["validation_error"] = outcome.validation_error;
    file["train_error"] = outcome.train_error;
    write_file(path, file.dump(2) + "\n");
}

void report_to_csv(const std::string& report_path,
                   const std::string& csv_path) {
    json file;
    try {
        file = json::parse(read_file(report_path));
    } catch (const json::exception& e) {
        throw CorruptFile("report '" + report_path + "' is not valid JSON: " +
                          e.what());
    }
    std::ostringstream out;
    out << "k,best_val_error,switch_iteration,iterations\n";
    try {
        for (const auto& entry : file.at("reports")) {
            out << entry.at("k").get<long>() << ','
                << format_double(entry.at("final_val_error").get<double>())
                << ',';
            if (entry.at("switch_iteration").is_null())
                out << "none";
            else
                out << entry.at("switch_iteration").get<long>();
            out << ',' << entry.at("iterations").get<long>() << '\n';
        }
    } catch (const json::exception& e) {
        throw CorruptFile("report '" + report_path + "' is malformed: " +
                          e.what());
    }
    write_file(csv_path, out.str());
}

} // namespace surrokit::io
