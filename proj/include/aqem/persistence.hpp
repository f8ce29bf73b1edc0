#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "aqem/trainer.hpp"

namespace aqem {

inline constexpr int kPolicySchemaVersion = 1;

/// Everything needed to reload and re-evaluate a trained policy.
struct PolicyFile {
    int schema_version = kPolicySchemaVersion;
    ProblemKind problem = ProblemKind::Interferometer;
    int n = 0;
    std::optional<int> steps;
    std::optional<WalkerStart> walk_start;
    std::vector<double> deltas;
    OptimizerKind optimizer = OptimizerKind::DE;
    DEConfig de;
    PSOConfig pso;
    std::uint64_t master_seed = 0;
    FitnessReport fitness;
    std::size_t repetitions = 0;
    bool ratio_met = true;
    double selection_sharpness = 0.0;
    double selection_imprecision = 0.0;
};

PolicyFile make_policy_file(const TrainingLadderConfig& config, const RungResult& rung);

/// Canonical JSON text; serializing a parsed file reproduces it byte for byte.
std::string to_json(const PolicyFile& file);
PolicyFile policy_from_json(const std::string& text);

void write_policy_file(const std::filesystem::path& path, const PolicyFile& file);
PolicyFile read_policy_file(const std::filesystem::path& path);

std::filesystem::path policy_path(const std::filesystem::path& dir, int n);
std::filesystem::path results_path(const std::filesystem::path& dir);

struct ResultRow {
    std::string problem;
    int n = 0;
    int steps = 0;
    double sharpness = 0.0;
    double holevo_imprecision = 0.0;
    double rmse = 0.0;
    std::size_t samples = 0;
    std::size_t repetitions = 0;
    std::uint64_t seed = 0;
    double wall_time_s = 0.0;
};

extern const char* const kResultsHeader;

ResultRow make_result_row(const TrainingLadderConfig& config, const RungResult& rung);
std::string format_result_row(const ResultRow& row);
ResultRow parse_result_row(const std::string& line);

/// Creates the file with its header if needed. Refuses a duplicate N.
void append_result_row(const std::filesystem::path& path, const ResultRow& row);
std::vector<ResultRow> read_results(const std::filesystem::path& path);
void write_results(const std::filesystem::path& path, const std::vector<ResultRow>& rows);

/// Policy file first, then the results row; a rung counts as done once its
/// row exists.
void persist_rung(const std::filesystem::path& dir, const TrainingLadderConfig& config, const RungResult& rung);

/// Rungs already recorded in `dir` for this configuration, in order. Throws
/// ConfigError if the directory belongs to a different problem or seed.
std::vector<RungResult> load_completed_rungs(const std::filesystem::path& dir, const TrainingLadderConfig& config);

/// N, fitted Delta, semiclassical and ultimate references.
void write_reference_curves(const std::filesystem::path& path, const LadderResult& result);

std::string format_double(double value);

}  // namespace aqem
