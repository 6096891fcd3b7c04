#pragma once

// Global planning layer: zero-shot prompt construction, bar-separated
// waypoint parsing, the evaluation gate, and the propose/evaluate/accept loop.

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coverpath/grid.hpp"
#include "coverpath/llm_client.hpp"
#include "coverpath/metrics.hpp"

namespace coverpath {

struct PlannerConfig {
  int max_iterations = 5;                // N
  std::optional<Thresholds> thresholds;  // θ; Thresholds::defaults_for(map) when unset
  double temperature = 0.6;
  std::string model_id;
  std::optional<CellCoord> target;  // p_t, appended to the task as the final cell
  bool feedback_on_reject = true;

  /// Throws InvalidConfig.
  void validate() const;
  /// An explicit max_turns of 0 still takes the per-map default.
  Thresholds thresholds_for(const GridMap& map) const;
};

/// Prompt templates with named placeholders: {width} {height} {obstacles}
/// {start} {format} {task} {grid} {max_col} {max_row}. Unknown placeholders
/// are left untouched.
struct PromptTemplates {
  std::string system;
  std::string user;

  static PromptTemplates defaults();
  /// Either path may be empty to keep the default for that part.
  static PromptTemplates load(const std::string& system_path, const std::string& user_path);
};

struct PromptContext {
  GridMap map;
  CellCoord start;
  std::string task_text;
  std::string format_instruction;

  /// Context with the default coverage task and output grammar.
  static PromptContext coverage(const GridMap& map, CellCoord start, std::optional<CellCoord> target = {});
};

struct Prompt {
  std::string system;
  std::string user;
};

Prompt build_prompt(const PromptContext& ctx, const PromptTemplates& templates = PromptTemplates::defaults());

/// Chessboard-style rendering, northmost row first: 'S' start, '#' obstacle, '.' free.
std::string render_board(const GridMap& map, CellCoord start);

/// Raised by parse_waypoints. `index` is the token position, `cell` the
/// offending cell for OutOfBounds / OnObstacle.
class WaypointParseError : public Error {
 public:
  WaypointParseError(ErrorCode code, const std::string& message, std::string token = {}, std::size_t index = 0,
                     std::optional<CellCoord> cell = {});

  const std::string& token() const noexcept { return token_; }
  std::size_t index() const noexcept { return index_; }
  const std::optional<CellCoord>& cell() const noexcept { return cell_; }

 private:
  std::string token_;
  std::size_t index_;
  std::optional<CellCoord> cell_;
};

/// "col,row|col,row|..." with surrounding whitespace and stray line breaks
/// tolerated, code-fence lines ignored and consecutive duplicates collapsed.
WaypointPath parse_waypoints(std::string_view text, const GridMap& map);

/// Inverse of parse_waypoints for valid paths.
std::string format_waypoints(const WaypointPath& path);

/// The path that will actually be driven: `path` with `start` prepended when
/// it begins elsewhere.
WaypointPath anchor_to_start(const WaypointPath& path, CellCoord start);

/// Evaluation gate. Metrics are computed on the start-anchored, BFS-expanded
/// path. Throws StartOnObstacle / InvalidPath.
EvaluationReport evaluate(const GridMap& map, CellCoord start, const WaypointPath& path, const Thresholds& th);

/// Human-readable explanation of a rejection, used in feedback prompts.
std::string describe_rejection(const EvaluationReport& report, const Thresholds& th);

struct PlanResult {
  WaypointPath path;  // start-anchored
  EvaluationReport report;
  int attempts = 0;
  double inference_seconds = 0.0;  // provider latency plus evaluation time
  std::vector<std::string> responses;
};

/// Thrown when max_iterations attempts were all rejected.
class ExhaustedIterationsError : public Error {
 public:
  ExhaustedIterationsError(int attempts, std::optional<EvaluationReport> last_report, double inference_seconds,
                           std::vector<std::string> responses);

  int attempts() const noexcept { return attempts_; }
  const std::optional<EvaluationReport>& last_report() const noexcept { return last_report_; }
  double inference_seconds() const noexcept { return inference_seconds_; }
  const std::vector<std::string>& responses() const noexcept { return responses_; }

 private:
  int attempts_;
  std::optional<EvaluationReport> last_report_;
  double inference_seconds_;
  std::vector<std::string> responses_;
};

/// Seconds on a monotonic clock; injectable so timing can be frozen.
using SecondsClock = std::function<double()>;
SecondsClock steady_seconds();

struct PlanOptions {
  PromptTemplates templates = PromptTemplates::defaults();
  SecondsClock clock = steady_seconds();
};

/// Propose, evaluate, accept. At most cfg.max_iterations provider calls; the
/// returned path always passed evaluate(). With feedback_on_reject each retry
/// adds a user message quoting the previous answer and why it failed.
PlanResult plan(const GridMap& map, CellCoord start, Provider& provider, const PlannerConfig& cfg,
                const PlanOptions& options = {});

}  // namespace coverpath
