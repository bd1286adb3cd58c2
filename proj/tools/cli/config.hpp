#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "ggmlab/evaluation.hpp"

namespace ggmlab::cli {

// Thrown for malformed or incomplete configuration files.
class ConfigError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

struct ConfigOverrides {
  std::optional<std::uint64_t> seed;
};

/// A parsed experiment configuration together with the exact text needed to
/// replay it (overrides already folded in).
struct LoadedConfig {
  ExperimentConfig experiment;
  SweepMode sweep_mode = SweepMode::kSnr;
  int holdout_runs = 0;
  std::string snapshot;  // TOML
};

LoadedConfig load_config(const std::filesystem::path& path,
                         const ConfigOverrides& overrides = {});
LoadedConfig parse_config(const std::string& text,
                          const ConfigOverrides& overrides = {});

}  // namespace ggmlab::cli
