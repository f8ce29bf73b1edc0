#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "aqem/trainer.hpp"

namespace aqem {

/// A training run as read from a config file.
struct RunConfig {
    TrainingLadderConfig ladder;
    std::filesystem::path output_dir = "aqem_out";
    /// Also score the all-zero policy on each rung's report stream (baseline.csv).
    bool baseline = false;
    /// Also compute the exact sharpness of each interferometer policy with N <= 12 (oracle.csv).
    bool oracle = false;
    std::size_t oracle_grid = 512;
};

/// Flat `key = value` text with `#` comments. Every key left at its default
/// is reported on `log`. Throws ConfigError naming the source, line and key.
RunConfig parse_config(const std::filesystem::path& path, std::ostream& log);
RunConfig parse_config_text(const std::string& text, const std::string& source, std::ostream& log);

/// One `key = value` line per setting, in the order accepted by the parser.
std::string describe(const RunConfig& config);

/// Name of the environment variable that overrides output_dir.
inline constexpr const char* kOutputDirEnv = "AQEM_OUTPUT_DIR";

}  // namespace aqem
