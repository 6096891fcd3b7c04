#include "coverpath/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "coverpath/experiment_config.hpp"
#include "coverpath/grid.hpp"
#include "coverpath/harness.hpp"
#include "coverpath/llm_client.hpp"
#include "coverpath/metrics.hpp"
#include "coverpath/nav.hpp"
#include "coverpath/patterns.hpp"
#include "coverpath/planner.hpp"
#include "coverpath/render.hpp"
#include "coverpath/sim.hpp"

namespace coverpath {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ExhaustedIterations: return kExitExhausted;
    case ErrorCode::SafetyStop:
    case ErrorCode::StalledProgress: return kExitDriveFailed;
    case ErrorCode::IoError: return kExitNoInput;
    case ErrorCode::NetworkError:
    case ErrorCode::AuthError:
    case ErrorCode::RateLimited:
    case ErrorCode::ProviderRejected:
    case ErrorCode::MalformedProviderResponse: return kExitUnavailable;
    default: return kExitDataErr;
  }
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::optional<double> parse_double(std::string_view s) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) return std::nullopt;
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  for (;;) {
    const std::size_t at = s.find(sep);
    out.push_back(s.substr(0, at));
    if (at == std::string_view::npos) return out;
    s.remove_prefix(at + 1);
  }
}

CellCoord parse_cell_arg(const std::string& text, const char* flag) {
  const auto parts = split(text, ',');
  if (parts.size() == 2) {
    int c = 0;
    int r = 0;
    const auto a = std::from_chars(parts[0].data(), parts[0].data() + parts[0].size(), c);
    const auto b = std::from_chars(parts[1].data(), parts[1].data() + parts[1].size(), r);
    if (a.ec == std::errc() && b.ec == std::errc() && a.ptr == parts[0].data() + parts[0].size() &&
        b.ptr == parts[1].data() + parts[1].size()) {
      return {c, r};
    }
  }
  throw UsageError(std::string(flag) + " expects col,row but got '" + text + "'");
}

Rect parse_rect_arg(const std::string& text) {
  const auto parts = split(text, ',');
  std::vector<double> v;
  for (std::string_view p : parts) {
    if (auto d = parse_double(p)) v.push_back(*d);
  }
  if (v.size() != 4 || parts.size() != 4 || !(v[0] < v[2] && v[1] < v[3])) {
    throw UsageError("--obstacle expects min_x,min_y,max_x,max_y but got '" + text + "'");
  }
  return {v[0], v[1], v[2], v[3]};
}

// "builtin:<id>" selects a bundled map, anything else is a map file.
GridMap load_map_arg(const std::string& arg) {
  constexpr std::string_view kPrefix = "builtin:";
  if (arg.starts_with(kPrefix)) {
    auto spec = builtin_map(arg.substr(kPrefix.size()));
    if (!spec) throw UsageError("no built-in map '" + arg.substr(kPrefix.size()) + "'");
    return *spec->map;
  }
  return load_map_file(arg);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
}

void print_report(std::ostream& os, const EvaluationReport& r) {
  os << "CR=" << fmt("%.2f", 100.0 * r.coverage_rate) << "% PL=" << fmt("%.2f", r.path_length)
     << " turns=" << r.turn_count << " l=" << fmt("%.2f", r.shortest_length) << " CPL=" << fmt("%.4f", r.cpl_term)
     << " verdict=" << (r.accepted ? "accepted" : "rejected") << "\n";
  if (!r.reasons.empty()) {
    os << "reasons:";
    for (RejectionReason reason : r.reasons) os << " " << to_string(reason);
    os << "\n";
  }
}

struct ThresholdFlags {
  double min_coverage = 0.95;
  int max_turns = 0;
  double max_length_ratio = 2.0;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--min-coverage", min_coverage, "Minimum coverage rate in [0,1]")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    cmd.add_option("--max-turns", max_turns, "Turn budget; 0 means 2*(width+height)")->check(CLI::NonNegativeNumber);
    cmd.add_option("--max-length-ratio", max_length_ratio, "Allowed path length over the shortest bound")
        ->capture_default_str();
  }

  Thresholds resolve(const GridMap& map) const {
    Thresholds th = Thresholds::defaults_for(map);
    th.min_coverage = min_coverage;
    if (max_turns > 0) th.max_turns = max_turns;
    th.max_length_ratio = max_length_ratio;
    th.validate();
    return th;
  }
};

struct ProviderFlags {
  std::string provider = "openai";
  std::string model;
  std::string script;
  std::string provider_url;
  double temperature = 0.6;
  int max_iters = 5;
  std::string system_prompt;
  std::string user_prompt;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--provider", provider, "openai | gemini | anthropic | scripted")->capture_default_str();
    cmd.add_option("--model", model, "Model id sent to the provider");
    cmd.add_option("--script", script, "Scripted oracle file (responses separated by '---' lines)");
    cmd.add_option("--provider-url", provider_url, "Override the provider base URL");
    cmd.add_option("--temperature", temperature, "Sampling temperature")->capture_default_str()->check(CLI::Range(0.0, 2.0));
    cmd.add_option("--max-iters", max_iters, "Maximum planning attempts")->capture_default_str()->check(CLI::PositiveNumber);
    cmd.add_option("--system-prompt", system_prompt, "System prompt template file");
    cmd.add_option("--user-prompt", user_prompt, "User prompt template file");
  }

  std::shared_ptr<Provider> make() const {
    if (!script.empty()) return std::make_shared<ScriptedOracle>(load_script_file(script));
    const auto kind = parse_provider_kind(provider);
    if (!kind) throw UsageError("unknown provider '" + provider + "'");
    if (*kind == ProviderKind::Scripted) throw UsageError("--provider scripted needs --script");
    ProviderConfig pc;
    pc.kind = *kind;
    pc.model_id = model.empty() ? default_model(*kind) : model;
    pc.base_url = provider_url;
    return make_provider(pc);
  }

  static std::string default_model(ProviderKind kind) {
    switch (kind) {
      case ProviderKind::OpenAI: return "gpt-4o";
      case ProviderKind::Gemini: return "gemini-1.5-flash";
      case ProviderKind::Anthropic: return "claude-3-5-sonnet-latest";
      case ProviderKind::Scripted: break;
    }
    return "scripted";
  }
};

int cmd_plan(const std::string& map_arg, const std::optional<std::string>& start_arg, std::optional<std::uint64_t> seed,
             const std::string& planner, const ProviderFlags& pf, const ThresholdFlags& tf, std::ostream& out,
             std::ostream& err) {
  const GridMap map = load_map_arg(map_arg);
  const CellCoord start = start_arg ? parse_cell_arg(*start_arg, "--start")
                          : seed    ? draw_start(map, *seed)
                                    : CellCoord{0, 0};
  const Thresholds th = tf.resolve(map);

  if (planner != "llm") {
    const auto pattern = parse_pattern(planner);
    if (!pattern) throw UsageError("unknown planner '" + planner + "'");
    const WaypointPath path = generate(*pattern, map, start);
    const EvaluationReport report = evaluate(map, start, path, th);
    out << format_waypoints(path) << "\n";
    print_report(err, report);
    return report.accepted ? kExitOk : kExitRejected;
  }

  const std::shared_ptr<Provider> provider = pf.make();
  PlannerConfig cfg;
  cfg.max_iterations = pf.max_iters;
  cfg.temperature = pf.temperature;
  cfg.model_id = pf.model;
  cfg.thresholds = th;
  PlanOptions options;
  options.templates = PromptTemplates::load(pf.system_prompt, pf.user_prompt);
  try {
    const PlanResult result = plan(map, start, *provider, cfg, options);
    out << format_waypoints(result.path) << "\n";
    print_report(err, result.report);
    err << "attempts=" << result.attempts << " Ti=" << fmt("%.3f", result.inference_seconds) << "s\n";
    return kExitOk;
  } catch (const ExhaustedIterationsError& e) {
    err << e.what() << "\n";
    if (e.last_report()) print_report(err, *e.last_report());
    return kExitExhausted;
  }
}

int cmd_evaluate(const std::string& map_arg, const std::string& path_text, const std::optional<std::string>& start_arg,
                 const ThresholdFlags& tf, std::ostream& out) {
  const GridMap map = load_map_arg(map_arg);
  const WaypointPath path = parse_waypoints(path_text, map);
  const CellCoord start = start_arg ? parse_cell_arg(*start_arg, "--start") : path.front();
  const EvaluationReport report = evaluate(map, start, path, tf.resolve(map));
  print_report(out, report);
  return report.accepted ? kExitOk : kExitRejected;
}

struct SimulateFlags {
  std::string path_text;
  std::string path_file;
  std::string method = "turn_and_drive";
  std::vector<std::string> obstacles;
  double sigma_xy = 0.0;
  double sigma_heading = 0.0;
  std::string trajectory_out;
  std::string svg_out;
};

int cmd_simulate(const std::string& map_arg, std::optional<std::uint64_t> seed, const SimulateFlags& sf,
                 std::ostream& out, std::ostream& err) {
  auto map = std::make_shared<const GridMap>(load_map_arg(map_arg));
  if (sf.path_text.empty() == sf.path_file.empty()) throw UsageError("give exactly one of --path or --path-file");
  const std::string text = sf.path_text.empty() ? read_file(sf.path_file) : sf.path_text;
  const WaypointPath path = parse_waypoints(text, *map);
  const auto method = parse_follow_method(sf.method);
  if (!method) throw UsageError("--method expects turn_and_drive or dog_curve");

  std::vector<Rect> extra;
  for (const std::string& o : sf.obstacles) extra.push_back(parse_rect_arg(o));
  SimConfig sim;
  sim.safety_radius = 0.15 * map->cell_size();
  const Point2 c = cell_center(*map, path.front());
  World world(map, {c.x, c.y, 0.0}, extra, sim);
  std::optional<Odometry> odometry;
  if (sf.sigma_xy > 0.0 || sf.sigma_heading > 0.0) odometry.emplace(sf.sigma_xy, sf.sigma_heading, seed.value_or(0));

  Trajectory trajectory;
  double driving = 0.0;
  int status = kExitOk;
  try {
    FollowResult r = follow(world, path, FollowerConfig::defaults_for(map->cell_size(), *method), MotionLimits{},
                            odometry ? &*odometry : nullptr);
    trajectory = std::move(r.trajectory);
    driving = r.driving_seconds;
  } catch (const FollowError& e) {
    err << e.what() << "\n";
    trajectory = e.trajectory();
    driving = e.driving_seconds();
    status = kExitDriveFailed;
  }

  const std::set<CellCoord> visited = visited_cells(trajectory, *map);
  out << "Td=" << fmt("%.3f", driving) << "s distance=" << fmt("%.3f", trajectory_length(trajectory))
      << " visited=" << visited.size() << "/" << map->free_count() << " CR="
      << fmt("%.2f", 100.0 * static_cast<double>(visited.size()) / static_cast<double>(map->free_count())) << "%\n";
  if (!sf.trajectory_out.empty()) {
    std::ostringstream log;
    write_trajectory_log(log, trajectory);
    write_file(sf.trajectory_out, log.str());
  }
  if (!sf.svg_out.empty()) write_file(sf.svg_out, render_path(*map, path, trajectory));
  return status;
}

struct ExperimentFlags {
  std::string config;
  std::string out_dir = "coverpath_out";
  std::optional<int> episodes;
  std::optional<int> workers;
  bool no_render = false;
};

int cmd_experiment(const ExperimentFlags& ef, std::optional<std::uint64_t> seed, std::ostream& out) {
  ExperimentConfig cfg = load_experiment_config(ef.config);
  if (ef.episodes) cfg.options.episodes_per_cell = *ef.episodes;
  if (ef.workers) cfg.options.workers = *ef.workers;
  if (seed) cfg.options.base_seed = *seed;
  const ExperimentSummary summary = run_experiment(cfg.maps, cfg.providers, cfg.episode, cfg.options);
  write_outputs(ef.out_dir, summary, cfg.maps, cfg.render && !ef.no_render);
  out << summary_table(summary.rows);
  return kExitOk;
}

int cmd_render(const std::string& map_arg, const std::string& path_text, const std::string& trajectory_file,
               const std::string& out_file, std::ostream& out) {
  const GridMap map = load_map_arg(map_arg);
  const WaypointPath path = parse_waypoints(path_text, map);
  Trajectory trajectory;
  if (!trajectory_file.empty()) {
    std::istringstream in(read_file(trajectory_file));
    trajectory = read_trajectory_log(in);
  }
  const std::string svg = render_path(map, path, trajectory);
  if (out_file.empty()) {
    out << svg;
  } else {
    write_file(out_file, svg);
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Grid coverage path planning with language-model planners"};
  app.name("coverpath");
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  app.add_option("--seed", seed, "Seed for start cells and noise");

  std::string map_arg;
  std::optional<std::string> start_arg;
  ThresholdFlags thresholds;
  ProviderFlags provider;

  auto* plan_cmd = app.add_subcommand("plan", "Plan a coverage path and print it as col,row|...");
  std::string planner = "llm";
  plan_cmd->add_option("--map", map_arg, "Map file or builtin:<id>")->required();
  plan_cmd->add_option("--start", start_arg, "Start cell col,row");
  plan_cmd->add_option("--planner", planner, "lawnmower | spiral | square | wallmow | walk | llm")
      ->capture_default_str();
  plan_cmd->add_option("--seed", seed, "Draws the start cell when --start is absent");
  provider.add_to(*plan_cmd);
  thresholds.add_to(*plan_cmd);

  auto* eval_cmd = app.add_subcommand("evaluate", "Score a waypoint string against the thresholds");
  std::string path_text;
  eval_cmd->add_option("--map", map_arg, "Map file or builtin:<id>")->required();
  eval_cmd->add_option("--path", path_text, "Waypoints col,row|col,row|...")->required();
  eval_cmd->add_option("--start", start_arg, "Start cell (default: first waypoint)");
  thresholds.add_to(*eval_cmd);

  auto* sim_cmd = app.add_subcommand("simulate", "Drive a waypoint path in the simulator");
  SimulateFlags sim;
  sim_cmd->add_option("--map", map_arg, "Map file or builtin:<id>")->required();
  sim_cmd->add_option("--path", sim.path_text, "Waypoints col,row|...");
  sim_cmd->add_option("--path-file", sim.path_file, "File holding the waypoint string");
  sim_cmd->add_option("--method", sim.method, "turn_and_drive | dog_curve")->capture_default_str();
  sim_cmd->add_option("--obstacle", sim.obstacles, "Unknown obstacle min_x,min_y,max_x,max_y (meters)");
  sim_cmd->add_option("--sigma-xy", sim.sigma_xy, "Odometry position noise (m)")->check(CLI::NonNegativeNumber);
  sim_cmd->add_option("--sigma-heading", sim.sigma_heading, "Odometry heading noise (rad)")
      ->check(CLI::NonNegativeNumber);
  sim_cmd->add_option("--trajectory", sim.trajectory_out, "Write the trajectory log here");
  sim_cmd->add_option("--svg", sim.svg_out, "Write an SVG rendering here");
  sim_cmd->add_option("--seed", seed, "Odometry noise seed");

  auto* exp_cmd = app.add_subcommand("experiment", "Run a batch of seeded episodes from a JSON config");
  ExperimentFlags exp;
  exp_cmd->add_option("config", exp.config, "Experiment config file")->required();
  exp_cmd->add_option("--out", exp.out_dir, "Output directory")->capture_default_str();
  exp_cmd->add_option("--episodes", exp.episodes, "Episodes per (map, model)")->check(CLI::PositiveNumber);
  exp_cmd->add_option("--workers", exp.workers, "Parallel episode workers")->check(CLI::PositiveNumber);
  exp_cmd->add_option("--seed", seed, "Base seed override");
  exp_cmd->add_flag("--no-render", exp.no_render, "Skip SVG renders");

  auto* render_cmd = app.add_subcommand("render", "Render a waypoint path (and optional trajectory) as SVG");
  std::string trajectory_file;
  std::string out_file;
  render_cmd->add_option("--map", map_arg, "Map file or builtin:<id>")->required();
  render_cmd->add_option("--path", path_text, "Waypoints col,row|...")->required();
  render_cmd->add_option("--trajectory", trajectory_file, "Trajectory log to overlay");
  render_cmd->add_option("--out", out_file, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (plan_cmd->parsed()) return cmd_plan(map_arg, start_arg, seed, planner, provider, thresholds, out, err);
    if (eval_cmd->parsed()) return cmd_evaluate(map_arg, path_text, start_arg, thresholds, out);
    if (sim_cmd->parsed()) return cmd_simulate(map_arg, seed, sim, out, err);
    if (exp_cmd->parsed()) return cmd_experiment(exp, seed, out);
    if (render_cmd->parsed()) return cmd_render(map_arg, path_text, trajectory_file, out_file, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitSoftware;
  }
  return kExitUsage;
}

}  // namespace coverpath
