#include "coverpath/planner.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace coverpath {

namespace {

constexpr std::string_view kDefaultSystem =
    "You control a small differential-drive mobile robot on a flat floor divided into square cells.\n"
    "Sensors: a forward position-sensitive distance sensor, a 360 degree LIDAR, and wheel odometry.\n"
    "Driving commands: turn in place to face east, north, west or south, and drive forward exactly one cell.\n"
    "Status: the robot knows its current cell and heading. It cannot move diagonally, cannot enter\n"
    "blocked cells, and cannot leave the map.\n"
    "You plan waypoints; a separate controller drives between them and stops for unexpected obstacles.";

constexpr std::string_view kDefaultUser =
    "The map is a grid of {width} columns by {height} rows, like a chessboard.\n"
    "A cell is written col,row. col runs from 0 (west) to {max_col} (east); row runs from 0 (south) to "
    "{max_row} (north).\n"
    "Blocked cells: {obstacles}.\n"
    "Board (north at the top, S = robot, # = blocked, . = free):\n"
    "{grid}\n"
    "Current location: {start}.\n"
    "Task: {task}\n"
    "{format}";

constexpr std::string_view kDefaultFormat =
    "Respond with the waypoint list only, in the format col,row|col,row|... for example 0,0|0,1|1,1. "
    "Begin at the current location, move to a 4-neighbouring cell at each step, and write no other text.";

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open prompt template '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string substitute(std::string_view tmpl, const std::vector<std::pair<std::string_view, std::string>>& values) {
  std::string out;
  out.reserve(tmpl.size() + 256);
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    const std::size_t open = tmpl.find('{', pos);
    if (open == std::string_view::npos) {
      out.append(tmpl.substr(pos));
      break;
    }
    out.append(tmpl.substr(pos, open - pos));
    const std::size_t close = tmpl.find('}', open);
    if (close == std::string_view::npos) {
      out.append(tmpl.substr(open));
      break;
    }
    const std::string_view key = tmpl.substr(open + 1, close - open - 1);
    bool replaced = false;
    for (const auto& [name, value] : values) {
      if (name == key) {
        out.append(value);
        replaced = true;
        break;
      }
    }
    if (!replaced) out.append(tmpl.substr(open, close - open + 1));
    pos = close + 1;
  }
  return out;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::optional<int> parse_int(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  int value = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || end != s.data() + s.size()) return std::nullopt;
  return value;
}

// Drops whole lines that open or close a markdown code fence.
std::string strip_fences(std::string_view text) {
  std::string out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    if (!trim(line).starts_with("```")) {
      out.append(line);
      out.push_back('\n');
    }
    pos = nl + 1;
  }
  return out;
}

std::string percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f%%", fraction * 100.0);
  return buf;
}

std::string fixed1(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

}  // namespace

void PlannerConfig::validate() const {
  if (max_iterations < 1) {
    throw Error(ErrorCode::InvalidConfig, "max_iterations must be at least 1");
  }
  if (!std::isfinite(temperature) || temperature < 0.0 || temperature > 2.0) {
    throw Error(ErrorCode::InvalidConfig, "temperature must lie in [0, 2]");
  }
  if (thresholds) thresholds->validate();
}

Thresholds PlannerConfig::thresholds_for(const GridMap& map) const {
  if (!thresholds) return Thresholds::defaults_for(map);
  Thresholds th = *thresholds;
  if (th.max_turns == 0) th.max_turns = Thresholds::defaults_for(map).max_turns;
  return th;
}

PromptTemplates PromptTemplates::defaults() { return {std::string(kDefaultSystem), std::string(kDefaultUser)}; }

PromptTemplates PromptTemplates::load(const std::string& system_path, const std::string& user_path) {
  PromptTemplates t = defaults();
  if (!system_path.empty()) t.system = read_text(system_path);
  if (!user_path.empty()) t.user = read_text(user_path);
  return t;
}

PromptContext PromptContext::coverage(const GridMap& map, CellCoord start, std::optional<CellCoord> target) {
  std::string task =
      "Plan a path that starts at the current location and visits every free cell at least once, "
      "with as few repeated cells and turns as possible.";
  if (target) task += " Finish the path at cell " + to_string(*target) + ".";
  return {map, start, std::move(task), std::string(kDefaultFormat)};
}

std::string render_board(const GridMap& map, CellCoord start) {
  std::string out;
  for (int row = map.height() - 1; row >= 0; --row) {
    for (int col = 0; col < map.width(); ++col) {
      const CellCoord c{col, row};
      out += c == start ? 'S' : (map.is_obstacle(c) ? '#' : '.');
    }
    if (row > 0) out += '\n';
  }
  return out;
}

Prompt build_prompt(const PromptContext& ctx, const PromptTemplates& templates) {
  std::string obstacles;
  for (const CellCoord& c : ctx.map.obstacles()) {
    if (!obstacles.empty()) obstacles += "; ";
    obstacles += to_string(c);
  }
  if (obstacles.empty()) obstacles = "none";
  const std::vector<std::pair<std::string_view, std::string>> values = {
      {"width", std::to_string(ctx.map.width())},
      {"height", std::to_string(ctx.map.height())},
      {"max_col", std::to_string(ctx.map.width() - 1)},
      {"max_row", std::to_string(ctx.map.height() - 1)},
      {"obstacles", obstacles},
      {"start", to_string(ctx.start)},
      {"format", ctx.format_instruction},
      {"task", ctx.task_text},
      {"grid", render_board(ctx.map, ctx.start)},
  };
  return {substitute(templates.system, values), substitute(templates.user, values)};
}

WaypointParseError::WaypointParseError(ErrorCode code, const std::string& message, std::string token,
                                       std::size_t index, std::optional<CellCoord> cell)
    : Error(code, message), token_(std::move(token)), index_(index), cell_(cell) {}

WaypointPath parse_waypoints(std::string_view text, const GridMap& map) {
  const std::string cleaned = strip_fences(text);
  if (trim(cleaned).empty()) {
    throw WaypointParseError(ErrorCode::EmptyResponse, "response contains no waypoints");
  }
  WaypointPath path;
  std::size_t index = 0;
  std::string_view rest = cleaned;
  while (true) {
    const std::size_t bar = rest.find('|');
    const std::string_view raw = rest.substr(0, bar);
    const std::string_view token = trim(raw);
    if (!token.empty()) {
      const std::size_t comma = token.find(',');
      std::optional<int> col, row;
      if (comma != std::string_view::npos) {
        col = parse_int(token.substr(0, comma));
        row = parse_int(token.substr(comma + 1));
      }
      if (!col || !row) {
        throw WaypointParseError(ErrorCode::MalformedToken,
                                 "token " + std::to_string(index) + " '" + std::string(token) + "' is not col,row",
                                 std::string(token), index);
      }
      const CellCoord cell{*col, *row};
      if (!map.in_bounds(cell)) {
        throw WaypointParseError(ErrorCode::OutOfBounds, "waypoint " + to_string(cell) + " is outside the map",
                                 std::string(token), index, cell);
      }
      if (map.is_obstacle(cell)) {
        throw WaypointParseError(ErrorCode::OnObstacle, "waypoint " + to_string(cell) + " is a blocked cell",
                                 std::string(token), index, cell);
      }
      if (path.empty() || path.back() != cell) path.cells.push_back(cell);
    }
    ++index;
    if (bar == std::string_view::npos) break;
    rest.remove_prefix(bar + 1);
  }
  if (path.empty()) {
    throw WaypointParseError(ErrorCode::EmptyResponse, "response contains no waypoints");
  }
  return path;
}

std::string format_waypoints(const WaypointPath& path) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i > 0) out += '|';
    out += to_string(path.cells[i]);
  }
  return out;
}

WaypointPath anchor_to_start(const WaypointPath& path, CellCoord start) {
  if (!path.empty() && path.front() == start) return path;
  WaypointPath anchored;
  anchored.cells.reserve(path.size() + 1);
  anchored.cells.push_back(start);
  anchored.cells.insert(anchored.cells.end(), path.cells.begin(), path.cells.end());
  return anchored;
}

EvaluationReport evaluate(const GridMap& map, CellCoord start, const WaypointPath& path, const Thresholds& th) {
  const double shortest = shortest_coverage_length(map, start);
  const WaypointPath anchored = anchor_to_start(path, start);
  const WaypointPath steps{expand_path(map, anchored)};
  std::vector<bool> seen(map.cell_count(), false);
  std::size_t distinct = 0;
  for (const CellCoord& c : steps.cells) {
    if (!seen[map.index(c)]) {
      seen[map.index(c)] = true;
      ++distinct;
    }
  }
  const double coverage = static_cast<double>(distinct) / static_cast<double>(map.free_count());
  const double length = static_cast<double>(steps.size() - 1) * map.cell_size();
  return make_report(coverage, length, turn_count(steps), shortest, th);
}

std::string describe_rejection(const EvaluationReport& report, const Thresholds& th) {
  std::string out;
  for (RejectionReason r : report.reasons) {
    if (!out.empty()) out += "; ";
    switch (r) {
      case RejectionReason::CoverageBelowThreshold:
        out += "it covers " + percent(report.coverage_rate) + " of the free cells but at least " +
               percent(th.min_coverage) + " is required";
        break;
      case RejectionReason::TooManyTurns:
        out += "it makes " + std::to_string(report.turn_count) + " turns but at most " +
               std::to_string(th.max_turns) + " are allowed";
        break;
      case RejectionReason::PathTooLong:
        out += "its length " + fixed1(report.path_length) + " exceeds " + fixed1(th.max_length_ratio) +
               " times the shortest coverage length " + fixed1(report.shortest_length);
        break;
    }
  }
  return out;
}

ExhaustedIterationsError::ExhaustedIterationsError(int attempts, std::optional<EvaluationReport> last_report,
                                                   double inference_seconds, std::vector<std::string> responses)
    : Error(ErrorCode::ExhaustedIterations,
            "no waypoint list passed evaluation in " + std::to_string(attempts) + " attempts"),
      attempts_(attempts),
      last_report_(std::move(last_report)),
      inference_seconds_(inference_seconds),
      responses_(std::move(responses)) {}

SecondsClock steady_seconds() {
  return [] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
  };
}

PlanResult plan(const GridMap& map, CellCoord start, Provider& provider, const PlannerConfig& cfg,
                const PlanOptions& options) {
  cfg.validate();
  if (!map.is_free(start)) {
    throw Error(map.in_bounds(start) ? ErrorCode::StartOnObstacle : ErrorCode::OutOfBounds,
                "start " + to_string(start) + " is not a free cell");
  }
  const Thresholds th = cfg.thresholds_for(map);
  const Prompt prompt = build_prompt(PromptContext::coverage(map, start, cfg.target), options.templates);

  ChatRequest request;
  request.system_prompt = prompt.system;
  request.user_messages.push_back(prompt.user);
  request.temperature = cfg.temperature;
  request.model_id = cfg.model_id;

  PlanResult result;
  std::optional<EvaluationReport> last_report;
  for (int n = 0; n < cfg.max_iterations; ++n) {
    const ChatResponse response = complete(provider, request);
    ++result.attempts;
    result.inference_seconds += response.latency;
    result.responses.push_back(response.text);

    const double eval_begin = options.clock();
    std::string feedback;
    try {
      const WaypointPath proposed = parse_waypoints(response.text, map);
      EvaluationReport report = evaluate(map, start, proposed, th);
      result.inference_seconds += options.clock() - eval_begin;
      if (report.accepted) {
        result.path = anchor_to_start(proposed, start);
        result.report = std::move(report);
        return result;
      }
      feedback = describe_rejection(report, th);
      last_report = std::move(report);
    } catch (const WaypointParseError& e) {
      result.inference_seconds += options.clock() - eval_begin;
      feedback = std::string("it could not be parsed (") + e.what() + ")";
      last_report.reset();
    }

    if (cfg.feedback_on_reject) {
      request.user_messages.push_back("Your previous answer was:\n" + response.text +
                                      "\nIt was rejected because " + feedback +
                                      ". Reply again with a corrected waypoint list in the same format.");
    }
  }
  throw ExhaustedIterationsError(result.attempts, std::move(last_report), result.inference_seconds,
                                 std::move(result.responses));
}

}  // namespace coverpath
