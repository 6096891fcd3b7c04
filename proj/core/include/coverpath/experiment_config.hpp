#pragma once

// JSON experiment description: maps, providers, planner/follower settings,
// seed and episode count. Relative file paths resolve against the config's
// directory.

#include <filesystem>
#include <string_view>

#include "coverpath/harness.hpp"

namespace coverpath {

struct ExperimentConfig {
  std::vector<MapSpec> maps;
  std::vector<ProviderSpec> providers;
  EpisodeConfig episode;
  ExperimentOptions options;
  bool render = true;
  bool frozen_clock = false;
};

/// Throws InvalidConfig (and the map / script loaders' own errors).
ExperimentConfig parse_experiment_config(std::string_view json_text, const std::filesystem::path& base_dir = {});

/// Throws IoError when the file is unreadable.
ExperimentConfig load_experiment_config(const std::filesystem::path& file);

}  // namespace coverpath
