#pragma once

// Episode orchestration: seeded random starts, plan -> evaluate -> follow,
// per-(map, model) aggregation and report files.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "coverpath/grid.hpp"
#include "coverpath/llm_client.hpp"
#include "coverpath/metrics.hpp"
#include "coverpath/nav.hpp"
#include "coverpath/planner.hpp"
#include "coverpath/sim.hpp"

namespace coverpath {

struct MapSpec {
  std::string id;
  std::shared_ptr<const GridMap> map;
  /// Rectangles the planner never sees; only the simulator knows them.
  std::vector<Rect> unknown_obstacles;
};

/// Obstacle-free 5x5, 7x7 and 11x11 ("free5", "free7", "free11") followed by
/// two obstacle maps ("pillars7", "ushape9").
std::vector<MapSpec> builtin_maps();
std::optional<MapSpec> builtin_map(const std::string& id);

/// Builds the provider used for one episode. Scripted providers return a
/// fresh instance per call so every episode replays from the beginning.
using ProviderFactory = std::function<std::shared_ptr<Provider>(const GridMap& map, CellCoord start)>;

struct ProviderSpec {
  std::string model_id;
  ProviderFactory factory;
};

/// Every episode shares one (thread-safe) provider instance.
ProviderSpec shared_provider(std::string model_id, std::shared_ptr<Provider> provider);
/// Every episode gets a new ScriptedOracle over `script`. Throws EmptyScript.
ProviderSpec scripted_provider(std::string model_id, std::vector<std::string> script);
/// Scripted oracle whose single response is coverage_walk from the episode start.
ProviderSpec optimal_oracle(std::string model_id);

struct EpisodeConfig {
  PlannerConfig planner;
  std::optional<FollowerConfig> follower;  // FollowerConfig::defaults_for(cell_size) when unset
  MotionLimits limits;
  /// safety_radius is given in cells and scaled by the map's cell size.
  double safety_radius_cells = 0.15;
  double max_range = 5.0;
  double odometry_sigma_xy = 0.0;
  double odometry_sigma_heading = 0.0;
  PromptTemplates templates = PromptTemplates::defaults();
  SecondsClock clock = steady_seconds();
};

/// Always returns 0; makes every wall-clock timing field 0.
SecondsClock frozen_clock();

struct EpisodeRecord {
  std::string map_id;
  std::string model_id;
  std::uint64_t seed = 0;
  CellCoord start;
  WaypointPath path;       // accepted, start-anchored; empty when planning failed
  EvaluationReport report;  // of the accepted path, else of the last evaluated attempt
  double shortest_length = 0.0;
  double executed_cr = 0.0;
  double executed_pl = 0.0;  // meters driven
  int attempts = 0;
  double T_i = 0.0;
  double T_d = 0.0;
  double T = 0.0;
  bool success = false;
  std::optional<ErrorCode> failure_kind;
  std::string failure_message;
  Trajectory trajectory;  // not persisted in the record file

  double cpl_term() const { return coverpath::cpl_term(executed_cr, shortest_length, executed_pl); }
};

/// Never throws for episode-level failures (ExhaustedIterations, provider
/// errors, SafetyStop, StalledProgress); those land in failure_kind.
EpisodeRecord run_episode(const MapSpec& map, const ProviderSpec& provider, const EpisodeConfig& cfg,
                          std::uint64_t seed);

/// Start cell drawn uniformly from the free cells.
CellCoord draw_start(const GridMap& map, std::uint64_t seed);

/// Seed of episode `episode` on map `map_index`; independent of the provider
/// so every model faces the same starts.
std::uint64_t episode_seed(std::uint64_t base_seed, std::size_t map_index, std::size_t episode);

struct SummaryRow {
  std::string map_id;
  std::string model_id;
  int episodes = 0;
  double cpl = 0.0;
  double pl = 0.0;
  double cr_percent = 0.0;
  double success_rate = 0.0;
  double T = 0.0;
  double T_i = 0.0;
  double T_d = 0.0;
};

struct ExperimentSummary {
  std::vector<SummaryRow> rows;
  std::vector<EpisodeRecord> records;
};

struct ExperimentOptions {
  int episodes_per_cell = 10;
  std::uint64_t base_seed = 0;
  int workers = 1;
};

/// Runs maps x providers x episodes_per_cell episodes. Records are ordered by
/// map, then provider, then episode regardless of the worker count.
ExperimentSummary run_experiment(const std::vector<MapSpec>& maps, const std::vector<ProviderSpec>& providers,
                                 const EpisodeConfig& cfg, const ExperimentOptions& options);

/// Groups records by (map, model) in first-appearance order.
std::vector<SummaryRow> summarize(const std::vector<EpisodeRecord>& records);

void write_records(std::ostream& out, const std::vector<EpisodeRecord>& records);
std::string summary_csv(const std::vector<SummaryRow>& rows);
std::string summary_table(const std::vector<SummaryRow>& rows);

/// episodes.jsonl, summary.csv, summary.txt and, when `renders`, one SVG per
/// episode under renders/. Throws IoError.
void write_outputs(const std::filesystem::path& dir, const ExperimentSummary& summary, const std::vector<MapSpec>& maps,
                   bool renders = true);

}  // namespace coverpath
