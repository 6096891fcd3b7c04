#include "coverpath/experiment_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace coverpath {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::InvalidConfig, where + ": " + what);
}

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) bad(where, "expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items()) {
    if (!ok.contains(key)) bad(where, "unknown key '" + key + "'");
  }
}

template <typename T>
T get(const json& obj, const char* key, const std::string& where, T fallback) {
  if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    bad(where + "." + key, "wrong type");
  }
}

std::string resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return (path.is_absolute() || base.empty() ? path : base / path).string();
}

CellCoord cell_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    bad(where, "expected [col, row]");
  }
  return {j[0].get<int>(), j[1].get<int>()};
}

MapSpec parse_map_entry(const json& j, const std::filesystem::path& base, std::size_t index) {
  const std::string where = "maps[" + std::to_string(index) + "]";
  if (j.is_string()) {
    auto m = builtin_map(j.get<std::string>());
    if (!m) bad(where, "no built-in map '" + j.get<std::string>() + "'");
    return *m;
  }
  only_keys(j, where, {"id", "builtin", "file", "width", "height", "cell_size", "obstacles", "unknown_obstacles"});
  const int sources = j.contains("builtin") + j.contains("file") + j.contains("width");
  if (sources != 1) bad(where, "give exactly one of builtin, file or width/height");

  MapSpec spec;
  if (j.contains("builtin")) {
    const std::string name = get<std::string>(j, "builtin", where, "");
    auto m = builtin_map(name);
    if (!m) bad(where, "no built-in map '" + name + "'");
    spec = *m;
  } else if (j.contains("file")) {
    const std::string file = get<std::string>(j, "file", where, "");
    spec.id = std::filesystem::path(file).stem().string();
    spec.map = std::make_shared<const GridMap>(load_map_file(resolve(base, file)));
  } else {
    std::vector<CellCoord> obstacles;
    if (j.contains("obstacles")) {
      if (!j.at("obstacles").is_array()) bad(where + ".obstacles", "expected an array");
      for (std::size_t i = 0; i < j.at("obstacles").size(); ++i) {
        obstacles.push_back(cell_from(j.at("obstacles")[i], where + ".obstacles[" + std::to_string(i) + "]"));
      }
    }
    const int w = get<int>(j, "width", where, 0);
    const int h = get<int>(j, "height", where, 0);
    spec.id = std::to_string(w) + "x" + std::to_string(h);
    spec.map = std::make_shared<const GridMap>(w, h, obstacles, get<double>(j, "cell_size", where, 1.0));
  }
  spec.id = get<std::string>(j, "id", where, spec.id);
  if (j.contains("unknown_obstacles")) {
    for (const json& r : j.at("unknown_obstacles")) {
      if (!r.is_array() || r.size() != 4) bad(where + ".unknown_obstacles", "expected [min_x, min_y, max_x, max_y]");
      const Rect rect{r[0].get<double>(), r[1].get<double>(), r[2].get<double>(), r[3].get<double>()};
      if (!(rect.min_x < rect.max_x && rect.min_y < rect.max_y)) bad(where + ".unknown_obstacles", "empty rectangle");
      spec.unknown_obstacles.push_back(rect);
    }
  }
  return spec;
}

ProviderSpec parse_provider_entry(const json& j, const std::filesystem::path& base, std::size_t index) {
  const std::string where = "providers[" + std::to_string(index) + "]";
  only_keys(j, where,
            {"model", "label", "kind", "generator", "script", "responses", "base_url", "timeout_s", "max_retries"});
  const std::string model = get<std::string>(j, "model", where, "");
  if (model.empty()) bad(where, "model is required");
  const std::string label = get<std::string>(j, "label", where, model);
  const auto kind = parse_provider_kind(get<std::string>(j, "kind", where, "scripted"));
  if (!kind) bad(where + ".kind", "expected scripted, openai, gemini or anthropic");

  if (*kind == ProviderKind::Scripted) {
    const int sources = j.contains("generator") + j.contains("script") + j.contains("responses");
    if (sources != 1) bad(where, "scripted providers need exactly one of generator, script or responses");
    if (j.contains("generator")) {
      const std::string gen = get<std::string>(j, "generator", where, "");
      if (gen != "optimal") bad(where + ".generator", "only \"optimal\" is supported");
      return optimal_oracle(label);
    }
    std::vector<std::string> script =
        j.contains("script") ? load_script_file(resolve(base, get<std::string>(j, "script", where, "")))
                             : get<std::vector<std::string>>(j, "responses", where, {});
    return scripted_provider(label, std::move(script));
  }

  ProviderConfig pc;
  pc.kind = *kind;
  pc.model_id = model;
  pc.base_url = get<std::string>(j, "base_url", where, "");
  pc.timeout = std::chrono::seconds(get<int>(j, "timeout_s", where, 60));
  pc.retry.max_retries = get<int>(j, "max_retries", where, 3);
  if (pc.retry.max_retries < 0) bad(where + ".max_retries", "must be >= 0");
  return shared_provider(label, make_provider(pc));
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  json root = json::parse(json_text, nullptr, false, true);
  if (root.is_discarded()) throw Error(ErrorCode::InvalidConfig, "experiment config is not valid JSON");
  only_keys(root, "config",
            {"seed", "episodes", "workers", "clock", "render", "maps", "providers", "planner", "follower", "motion",
             "odometry", "prompts", "safety_radius_cells", "max_range"});

  ExperimentConfig cfg;
  cfg.options.base_seed = get<std::uint64_t>(root, "seed", "config", 0);
  cfg.options.episodes_per_cell = get<int>(root, "episodes", "config", 10);
  if (cfg.options.episodes_per_cell < 1) bad("config.episodes", "must be >= 1");
  cfg.options.workers = get<int>(root, "workers", "config", 1);
  if (cfg.options.workers < 1) bad("config.workers", "must be >= 1");
  cfg.render = get<bool>(root, "render", "config", true);
  const std::string clock = get<std::string>(root, "clock", "config", "wall");
  if (clock != "wall" && clock != "frozen") bad("config.clock", "expected \"wall\" or \"frozen\"");
  cfg.frozen_clock = clock == "frozen";
  cfg.episode.clock = cfg.frozen_clock ? frozen_clock() : steady_seconds();
  cfg.episode.safety_radius_cells = get<double>(root, "safety_radius_cells", "config", 0.15);
  cfg.episode.max_range = get<double>(root, "max_range", "config", 5.0);

  if (!root.contains("maps") || !root.at("maps").is_array() || root.at("maps").empty()) {
    bad("config.maps", "need a non-empty array");
  }
  for (std::size_t i = 0; i < root.at("maps").size(); ++i) {
    cfg.maps.push_back(parse_map_entry(root.at("maps")[i], base_dir, i));
  }
  std::set<std::string> ids;
  for (const MapSpec& m : cfg.maps) {
    if (!ids.insert(m.id).second) bad("config.maps", "duplicate map id '" + m.id + "'");
  }

  if (!root.contains("providers") || !root.at("providers").is_array() || root.at("providers").empty()) {
    bad("config.providers", "need a non-empty array");
  }
  for (std::size_t i = 0; i < root.at("providers").size(); ++i) {
    cfg.providers.push_back(parse_provider_entry(root.at("providers")[i], base_dir, i));
  }

  if (root.contains("planner")) {
    const json& p = root.at("planner");
    only_keys(p, "planner",
              {"max_iterations", "temperature", "min_coverage", "max_turns", "max_length_ratio", "feedback"});
    PlannerConfig& pc = cfg.episode.planner;
    pc.max_iterations = get<int>(p, "max_iterations", "planner", pc.max_iterations);
    pc.temperature = get<double>(p, "temperature", "planner", pc.temperature);
    pc.feedback_on_reject = get<bool>(p, "feedback", "planner", pc.feedback_on_reject);
    if (p.contains("min_coverage") || p.contains("max_turns") || p.contains("max_length_ratio")) {
      // Per-map defaults still apply to max_turns when only the others are set.
      Thresholds th;
      th.min_coverage = get<double>(p, "min_coverage", "planner", th.min_coverage);
      th.max_turns = get<int>(p, "max_turns", "planner", 0);
      th.max_length_ratio = get<double>(p, "max_length_ratio", "planner", th.max_length_ratio);
      pc.thresholds = th;
    }
    pc.validate();
  }

  if (root.contains("follower")) {
    const json& f = root.at("follower");
    only_keys(f, "follower", {"method", "reach_threshold", "lookahead", "safety_distance", "heading_gain"});
    const auto method = parse_follow_method(get<std::string>(f, "method", "follower", "turn_and_drive"));
    if (!method) bad("follower.method", "expected turn_and_drive or dog_curve");
    // Distances are in meters; the first map's cell size fixes the defaults.
    FollowerConfig fc = FollowerConfig::defaults_for(cfg.maps.front().map->cell_size(), *method);
    fc.reach_threshold = get<double>(f, "reach_threshold", "follower", fc.reach_threshold);
    fc.lookahead = get<double>(f, "lookahead", "follower", fc.lookahead);
    fc.safety_distance = get<double>(f, "safety_distance", "follower", fc.safety_distance);
    fc.heading_gain = get<double>(f, "heading_gain", "follower", fc.heading_gain);
    fc.validate();
    cfg.episode.follower = fc;
  }

  if (root.contains("motion")) {
    const json& m = root.at("motion");
    only_keys(m, "motion", {"linear_speed", "angular_speed", "dt"});
    MotionLimits& ml = cfg.episode.limits;
    ml.linear_speed = get<double>(m, "linear_speed", "motion", ml.linear_speed);
    ml.angular_speed = get<double>(m, "angular_speed", "motion", ml.angular_speed);
    ml.dt = get<double>(m, "dt", "motion", ml.dt);
    ml.validate();
  }

  if (root.contains("odometry")) {
    const json& o = root.at("odometry");
    only_keys(o, "odometry", {"sigma_xy", "sigma_heading"});
    cfg.episode.odometry_sigma_xy = get<double>(o, "sigma_xy", "odometry", 0.0);
    cfg.episode.odometry_sigma_heading = get<double>(o, "sigma_heading", "odometry", 0.0);
    if (cfg.episode.odometry_sigma_xy < 0 || cfg.episode.odometry_sigma_heading < 0) {
      bad("odometry", "noise must be non-negative");
    }
  }

  if (root.contains("prompts")) {
    const json& p = root.at("prompts");
    only_keys(p, "prompts", {"system", "user"});
    const std::string sys = get<std::string>(p, "system", "prompts", "");
    const std::string user = get<std::string>(p, "user", "prompts", "");
    cfg.episode.templates =
        PromptTemplates::load(sys.empty() ? sys : resolve(base_dir, sys), user.empty() ? user : resolve(base_dir, user));
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open experiment config '" + file.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_experiment_config(buf.str(), file.parent_path());
}

}  // namespace coverpath
