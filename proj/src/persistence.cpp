#include "aqem/persistence.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "aqem/errors.hpp"

namespace aqem {

namespace {

using Json = nlohmann::ordered_json;

Json finite_or_null(double value) {
    return std::isfinite(value) ? Json(value) : Json(nullptr);
}

double number_or_inf(const Json& j) {
    return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot write " + tmp.string());
        }
        out << text;
        if (!out) {
            throw IoError("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

double parse_double_field(const std::string& text, const char* name) {
    errno = 0;
    char* end = nullptr;
    const double value = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
        throw IoError(std::string("bad ") + name + " field '" + text + "' in results row");
    }
    return value;
}

std::uint64_t parse_unsigned_field(const std::string& text, const char* name) {
    errno = 0;
    char* end = nullptr;
    const unsigned long long value = std::strtoull(text.c_str(), &end, 10);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || text.front() == '-') {
        throw IoError(std::string("bad ") + name + " field '" + text + "' in results row");
    }
    return value;
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    return line;
}

}  // namespace

const char* const kResultsHeader = "problem,N,t,sharpness,holevo_imprecision,rmse,K,repetitions,seed,wall_time_s";

std::string format_double(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    char buffer[32];
    const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, end);
}

PolicyFile make_policy_file(const TrainingLadderConfig& config, const RungResult& rung) {
    PolicyFile f;
    f.problem = config.problem;
    f.n = rung.n;
    if (config.problem == ProblemKind::Walk) {
        f.steps = config.walk_steps;
        f.walk_start = config.walk_start;
    }
    f.deltas = rung.policy;
    f.optimizer = config.optimizer;
    f.de = config.de;
    f.pso = config.pso;
    const auto population = static_cast<std::size_t>(config.budgets.population(rung.n));
    const auto iterations = static_cast<std::size_t>(config.budgets.iterations(rung.n));
    f.de.population = f.pso.population = population;
    f.de.iterations = f.pso.iterations = iterations;
    f.master_seed = config.master_seed;
    f.fitness = rung.report;
    f.repetitions = rung.repetitions;
    f.ratio_met = rung.ratio_met;
    f.selection_sharpness = rung.selection.sharpness;
    f.selection_imprecision = rung.selection.holevo_imprecision;
    return f;
}

std::string to_json(const PolicyFile& f) {
    Json j;
    j["schema_version"] = f.schema_version;
    j["problem"] = problem_name(f.problem);
    j["N"] = f.n;
    j["t"] = f.steps ? Json(*f.steps) : Json(nullptr);
    j["walk_start"] = f.walk_start ? Json(walker_start_name(*f.walk_start)) : Json(nullptr);
    j["deltas"] = f.deltas;

    Json opt;
    opt["name"] = optimizer_name(f.optimizer);
    Json cfg;
    if (f.optimizer == OptimizerKind::DE) {
        cfg["xi"] = f.de.population;
        cfg["upsilon"] = f.de.iterations;
        cfg["mu"] = f.de.mutation_scale;
        cfg["gamma"] = f.de.crossover_rate;
    } else {
        cfg["xi"] = f.pso.population;
        cfg["upsilon"] = f.pso.iterations;
        cfg["alpha"] = f.pso.exploration;
        cfg["beta"] = f.pso.exploitation;
        cfg["inertia"] = f.pso.inertia;
        cfg["nu"] = f.pso.velocity_clamp ? Json(*f.pso.velocity_clamp) : Json(nullptr);
        cfg["neighborhood"] = f.pso.neighborhood_size ? Json(*f.pso.neighborhood_size) : Json(nullptr);
    }
    opt["config"] = std::move(cfg);
    j["optimizer"] = std::move(opt);
    j["master_seed"] = f.master_seed;

    Json fit;
    fit["sharpness"] = f.fitness.sharpness;
    fit["holevo_imprecision"] = finite_or_null(f.fitness.holevo_imprecision);
    fit["rmse"] = f.fitness.rmse;
    fit["K"] = f.fitness.samples;
    fit["seed"] = Json{{"master", f.fitness.seed.master_seed}, {"stream", f.fitness.seed.stream_id}};
    fit["wall_time_s"] = f.fitness.wall_time_s;
    j["fitness"] = std::move(fit);

    Json training;
    training["repetitions"] = f.repetitions;
    training["ratio_met"] = f.ratio_met;
    training["selection_sharpness"] = f.selection_sharpness;
    training["selection_imprecision"] = finite_or_null(f.selection_imprecision);
    j["training"] = std::move(training);
    return j.dump(2) + "\n";
}

PolicyFile policy_from_json(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw IoError(std::string("policy file is not valid JSON: ") + e.what());
    }
    try {
        PolicyFile f;
        f.schema_version = j.at("schema_version").get<int>();
        if (f.schema_version != kPolicySchemaVersion) {
            throw IoError("unsupported policy schema_version " + std::to_string(f.schema_version));
        }
        f.problem = parse_problem(j.at("problem").get<std::string>());
        f.n = j.at("N").get<int>();
        if (!j.at("t").is_null()) {
            f.steps = j.at("t").get<int>();
        }
        if (!j.at("walk_start").is_null()) {
            f.walk_start = parse_walker_start(j.at("walk_start").get<std::string>());
        }
        f.deltas = j.at("deltas").get<std::vector<double>>();
        if (f.deltas.size() != static_cast<std::size_t>(f.n)) {
            throw IoError("policy file has " + std::to_string(f.deltas.size()) + " deltas for N=" +
                          std::to_string(f.n));
        }
        const Json& opt = j.at("optimizer");
        f.optimizer = parse_optimizer(opt.at("name").get<std::string>());
        const Json& cfg = opt.at("config");
        if (f.optimizer == OptimizerKind::DE) {
            f.de.population = cfg.at("xi").get<std::size_t>();
            f.de.iterations = cfg.at("upsilon").get<std::size_t>();
            f.de.mutation_scale = cfg.at("mu").get<double>();
            f.de.crossover_rate = cfg.at("gamma").get<double>();
        } else {
            f.pso.population = cfg.at("xi").get<std::size_t>();
            f.pso.iterations = cfg.at("upsilon").get<std::size_t>();
            f.pso.exploration = cfg.at("alpha").get<double>();
            f.pso.exploitation = cfg.at("beta").get<double>();
            f.pso.inertia = cfg.at("inertia").get<double>();
            if (!cfg.at("nu").is_null()) {
                f.pso.velocity_clamp = cfg.at("nu").get<double>();
            }
            if (!cfg.at("neighborhood").is_null()) {
                f.pso.neighborhood_size = cfg.at("neighborhood").get<std::size_t>();
            }
        }
        f.master_seed = j.at("master_seed").get<std::uint64_t>();
        const Json& fit = j.at("fitness");
        f.fitness.sharpness = fit.at("sharpness").get<double>();
        f.fitness.holevo_imprecision = number_or_inf(fit.at("holevo_imprecision"));
        f.fitness.rmse = fit.at("rmse").get<double>();
        f.fitness.samples = fit.at("K").get<std::size_t>();
        f.fitness.seed.master_seed = fit.at("seed").at("master").get<std::uint64_t>();
        f.fitness.seed.stream_id = fit.at("seed").at("stream").get<std::uint64_t>();
        f.fitness.wall_time_s = fit.at("wall_time_s").get<double>();
        const Json& training = j.at("training");
        f.repetitions = training.at("repetitions").get<std::size_t>();
        f.ratio_met = training.at("ratio_met").get<bool>();
        f.selection_sharpness = training.at("selection_sharpness").get<double>();
        f.selection_imprecision = number_or_inf(training.at("selection_imprecision"));
        return f;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("malformed policy file: ") + e.what());
    } catch (const ConfigError& e) {
        throw IoError(std::string("malformed policy file: ") + e.what());
    }
}

void write_policy_file(const std::filesystem::path& path, const PolicyFile& file) {
    write_text_atomic(path, to_json(file));
}

PolicyFile read_policy_file(const std::filesystem::path& path) {
    try {
        return policy_from_json(read_text(path));
    } catch (const IoError& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

std::filesystem::path policy_path(const std::filesystem::path& dir, int n) {
    char name[32];
    std::snprintf(name, sizeof name, "policy_N%02d.json", n);
    return dir / name;
}

std::filesystem::path results_path(const std::filesystem::path& dir) {
    return dir / "results.csv";
}

ResultRow make_result_row(const TrainingLadderConfig& config, const RungResult& rung) {
    ResultRow row;
    row.problem = problem_name(config.problem);
    row.n = rung.n;
    row.steps = config.problem == ProblemKind::Walk ? config.walk_steps : 0;
    row.sharpness = rung.report.sharpness;
    row.holevo_imprecision = rung.report.holevo_imprecision;
    row.rmse = rung.report.rmse;
    row.samples = static_cast<std::size_t>(config.budgets.samples(rung.n));
    row.repetitions = rung.repetitions;
    row.seed = config.master_seed;
    row.wall_time_s = rung.report.wall_time_s;
    return row;
}

std::string format_result_row(const ResultRow& row) {
    std::string line = row.problem;
    line += ',' + std::to_string(row.n);
    line += ',' + (row.steps > 0 ? std::to_string(row.steps) : std::string());
    line += ',' + format_double(row.sharpness);
    line += ',' + format_double(row.holevo_imprecision);
    line += ',' + format_double(row.rmse);
    line += ',' + std::to_string(row.samples);
    line += ',' + std::to_string(row.repetitions);
    line += ',' + std::to_string(row.seed);
    line += ',' + format_double(row.wall_time_s);
    return line;
}

ResultRow parse_result_row(const std::string& text) {
    const std::string line = strip_cr(text);
    const auto fields = split_csv(line);
    if (fields.size() != 10) {
        throw IoError("results row has " + std::to_string(fields.size()) + " fields, expected 10: " + line);
    }
    ResultRow row;
    row.problem = fields[0];
    row.n = static_cast<int>(parse_unsigned_field(fields[1], "N"));
    row.steps = fields[2].empty() ? 0 : static_cast<int>(parse_unsigned_field(fields[2], "t"));
    row.sharpness = parse_double_field(fields[3], "sharpness");
    row.holevo_imprecision = parse_double_field(fields[4], "holevo_imprecision");
    row.rmse = parse_double_field(fields[5], "rmse");
    row.samples = parse_unsigned_field(fields[6], "K");
    row.repetitions = parse_unsigned_field(fields[7], "repetitions");
    row.seed = parse_unsigned_field(fields[8], "seed");
    row.wall_time_s = parse_double_field(fields[9], "wall_time_s");
    return row;
}

std::vector<ResultRow> read_results(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::string line;
    if (!std::getline(in, line) || strip_cr(line) != kResultsHeader) {
        throw IoError(path.string() + ": missing or unexpected results header");
    }
    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (strip_cr(line).empty()) {
            continue;
        }
        try {
            rows.push_back(parse_result_row(line));
        } catch (const IoError& e) {
            throw IoError(path.string() + ": " + e.what());
        }
    }
    return rows;
}

void write_results(const std::filesystem::path& path, const std::vector<ResultRow>& rows) {
    std::string text = std::string(kResultsHeader) + "\n";
    for (const auto& row : rows) {
        text += format_result_row(row) + "\n";
    }
    write_text_atomic(path, text);
}

void append_result_row(const std::filesystem::path& path, const ResultRow& row) {
    if (!std::filesystem::exists(path)) {
        write_results(path, {row});
        return;
    }
    for (const auto& existing : read_results(path)) {
        if (existing.n == row.n && existing.problem == row.problem) {
            throw IoError(path.string() + ": already holds a row for N=" + std::to_string(row.n));
        }
    }
    std::ofstream out(path, std::ios::app);
    if (!out) {
        throw IoError("cannot append to " + path.string());
    }
    out << format_result_row(row) << '\n';
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

void persist_rung(const std::filesystem::path& dir, const TrainingLadderConfig& config, const RungResult& rung) {
    std::filesystem::create_directories(dir);
    write_policy_file(policy_path(dir, rung.n), make_policy_file(config, rung));
    append_result_row(results_path(dir), make_result_row(config, rung));
}

std::vector<RungResult> load_completed_rungs(const std::filesystem::path& dir, const TrainingLadderConfig& config) {
    const auto path = results_path(dir);
    std::vector<RungResult> rungs;
    if (!std::filesystem::exists(path)) {
        return rungs;
    }
    const std::string problem = problem_name(config.problem);
    int expected = config.n_min;
    for (const auto& row : read_results(path)) {
        if (row.problem != problem || row.seed != config.master_seed) {
            throw ConfigError(dir.string() + " holds results for problem " + row.problem + " with seed " +
                              std::to_string(row.seed) + "; use another output directory");
        }
        if (row.n != expected) {
            throw IoError(path.string() + ": expected a row for N=" + std::to_string(expected) + ", found N=" +
                          std::to_string(row.n));
        }
        if (row.n > config.n_max) {
            break;
        }
        const PolicyFile f = read_policy_file(policy_path(dir, row.n));
        if (f.problem != config.problem || f.master_seed != config.master_seed || f.n != row.n ||
            (config.problem == ProblemKind::Walk && f.steps != config.walk_steps)) {
            throw ConfigError(policy_path(dir, row.n).string() + " does not match the current configuration");
        }
        RungResult r;
        r.n = f.n;
        r.policy = f.deltas;
        r.report = f.fitness;
        r.repetitions = f.repetitions;
        r.ratio_met = f.ratio_met;
        r.selection.sharpness = f.selection_sharpness;
        r.selection.holevo_imprecision = f.selection_imprecision;
        rungs.push_back(std::move(r));
        ++expected;
    }
    return rungs;
}

void write_reference_curves(const std::filesystem::path& path, const LadderResult& result) {
    std::string text = "N,holevo_imprecision,fitted,semiclassical,ultimate\n";
    for (std::size_t i = 0; i < result.rungs.size(); ++i) {
        const auto& rung = result.rungs[i];
        text += std::to_string(rung.n) + ',' + format_double(rung.report.holevo_imprecision) + ',';
        if (result.scaling) {
            text += format_double(result.scaling->predict(rung.n));
        }
        text += ',';
        if (i < result.references.size()) {
            text += format_double(result.references[i].semiclassical) + ',' +
                    format_double(result.references[i].ultimate);
        } else {
            text += ',';
        }
        text += '\n';
    }
    write_text_atomic(path, text);
}

}  // namespace aqem
