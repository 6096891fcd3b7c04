#include "coverpath/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "coverpath/patterns.hpp"
#include "coverpath/render.hpp"

namespace coverpath {

namespace {

MapSpec make_spec(std::string id, GridMap map) {
  return {std::move(id), std::make_shared<const GridMap>(std::move(map)), {}};
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Trajectory lengths accumulate rounding noise of order 1e-15 per step;
// snapping to the nanometer keeps exact plans exact in the summary.
double snap(double meters) { return std::round(meters * 1e9) / 1e9; }

}  // namespace

std::vector<MapSpec> builtin_maps() {
  std::vector<MapSpec> out;
  out.push_back(make_spec("free5", GridMap::rectangle(5, 5)));
  out.push_back(make_spec("free7", GridMap::rectangle(7, 7)));
  out.push_back(make_spec("free11", GridMap::rectangle(11, 11)));
  out.push_back(make_spec("pillars7", GridMap(7, 7, {{2, 2}, {4, 2}, {2, 4}, {4, 4}})));
  std::vector<CellCoord> u;
  for (int r = 2; r <= 6; ++r) {
    u.push_back({2, r});
    u.push_back({6, r});
  }
  for (int c = 3; c <= 5; ++c) u.push_back({c, 2});
  out.push_back(make_spec("ushape9", GridMap(9, 9, u)));
  return out;
}

std::optional<MapSpec> builtin_map(const std::string& id) {
  for (MapSpec& m : builtin_maps()) {
    if (m.id == id) return std::move(m);
  }
  return std::nullopt;
}

ProviderSpec shared_provider(std::string model_id, std::shared_ptr<Provider> provider) {
  if (!provider) throw Error(ErrorCode::InvalidConfig, "shared_provider needs a provider");
  return {std::move(model_id), [provider](const GridMap&, CellCoord) { return provider; }};
}

ProviderSpec scripted_provider(std::string model_id, std::vector<std::string> script) {
  if (script.empty()) throw Error(ErrorCode::EmptyScript, "scripted provider '" + model_id + "' has no responses");
  return {std::move(model_id), [script = std::move(script)](const GridMap&, CellCoord) {
            return std::make_shared<ScriptedOracle>(script);
          }};
}

ProviderSpec optimal_oracle(std::string model_id) {
  return {std::move(model_id), [](const GridMap& map, CellCoord start) {
            return std::make_shared<ScriptedOracle>(std::vector<std::string>{format_waypoints(coverage_walk(map, start))});
          }};
}

SecondsClock frozen_clock() {
  return [] { return 0.0; };
}

CellCoord draw_start(const GridMap& map, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, map.free_count() - 1);
  return map.free_cells()[pick(rng)];
}

std::uint64_t episode_seed(std::uint64_t base_seed, std::size_t map_index, std::size_t episode) {
  return splitmix64(splitmix64(splitmix64(base_seed) ^ map_index) ^ episode);
}

EpisodeRecord run_episode(const MapSpec& spec, const ProviderSpec& provider, const EpisodeConfig& cfg,
                          std::uint64_t seed) {
  const GridMap& map = *spec.map;
  const double t_begin = cfg.clock();

  EpisodeRecord rec;
  rec.map_id = spec.id;
  rec.model_id = provider.model_id;
  rec.seed = seed;
  rec.start = draw_start(map, seed);
  rec.shortest_length = shortest_coverage_length(map, rec.start);
  const Point2 start_xy = cell_center(map, rec.start);
  rec.trajectory.push_back({0.0, start_xy.x, start_xy.y, 0.0, 0.0, 0.0});

  PlannerConfig planner = cfg.planner;
  if (planner.model_id.empty()) planner.model_id = provider.model_id;
  const Thresholds th = planner.thresholds_for(map);

  auto finish = [&] {
    const std::set<CellCoord> visited = visited_cells(rec.trajectory, map);
    rec.executed_cr = static_cast<double>(visited.size()) / static_cast<double>(map.free_count());
    rec.executed_pl = snap(trajectory_length(rec.trajectory));
    rec.success = !rec.failure_kind && rec.executed_cr >= th.min_coverage;
    rec.T = (cfg.clock() - t_begin) + rec.T_d;
    return rec;
  };

  try {
    std::shared_ptr<Provider> p = provider.factory(map, rec.start);
    PlanResult planned = plan(map, rec.start, *p, planner, PlanOptions{cfg.templates, cfg.clock});
    rec.path = std::move(planned.path);
    rec.report = std::move(planned.report);
    rec.attempts = planned.attempts;
    rec.T_i = planned.inference_seconds;
  } catch (const ExhaustedIterationsError& e) {
    rec.attempts = e.attempts();
    rec.T_i = e.inference_seconds();
    if (e.last_report()) rec.report = *e.last_report();
    rec.failure_kind = e.code();
    rec.failure_message = e.what();
    return finish();
  } catch (const Error& e) {
    rec.failure_kind = e.code();
    rec.failure_message = e.what();
    return finish();
  }

  SimConfig sim;
  sim.safety_radius = cfg.safety_radius_cells * map.cell_size();
  sim.max_range = cfg.max_range;
  World world(spec.map, Pose{start_xy.x, start_xy.y, 0.0}, spec.unknown_obstacles, sim);
  const FollowerConfig follower = cfg.follower.value_or(FollowerConfig::defaults_for(map.cell_size()));
  std::optional<Odometry> odometry;
  if (cfg.odometry_sigma_xy > 0.0 || cfg.odometry_sigma_heading > 0.0) {
    odometry.emplace(cfg.odometry_sigma_xy, cfg.odometry_sigma_heading, splitmix64(seed ^ 0x6f646f6dULL));
  }
  try {
    FollowResult driven = follow(world, rec.path, follower, cfg.limits, odometry ? &*odometry : nullptr);
    rec.trajectory = std::move(driven.trajectory);
    rec.T_d = driven.driving_seconds;
  } catch (const FollowError& e) {
    rec.trajectory = e.trajectory();
    rec.T_d = e.driving_seconds();
    rec.failure_kind = e.code();
    rec.failure_message = e.what();
  } catch (const Error& e) {
    rec.failure_kind = e.code();
    rec.failure_message = e.what();
  }
  return finish();
}

ExperimentSummary run_experiment(const std::vector<MapSpec>& maps, const std::vector<ProviderSpec>& providers,
                                 const EpisodeConfig& cfg, const ExperimentOptions& options) {
  if (options.episodes_per_cell < 1) throw Error(ErrorCode::InvalidConfig, "episodes_per_cell must be >= 1");
  if (maps.empty() || providers.empty()) throw Error(ErrorCode::InvalidConfig, "need at least one map and provider");
  cfg.planner.validate();

  struct Item {
    std::size_t map;
    std::size_t provider;
    std::size_t episode;
  };
  std::vector<Item> items;
  for (std::size_t m = 0; m < maps.size(); ++m) {
    for (std::size_t p = 0; p < providers.size(); ++p) {
      for (int e = 0; e < options.episodes_per_cell; ++e) items.push_back({m, p, static_cast<std::size_t>(e)});
    }
  }

  ExperimentSummary summary;
  summary.records.resize(items.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < items.size(); i = next.fetch_add(1)) {
      const Item& it = items[i];
      summary.records[i] = run_episode(maps[it.map], providers[it.provider], cfg,
                                       episode_seed(options.base_seed, it.map, it.episode));
    }
  };
  const int workers = std::clamp(options.workers, 1, static_cast<int>(items.size()));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  summary.rows = summarize(summary.records);
  return summary;
}

std::vector<SummaryRow> summarize(const std::vector<EpisodeRecord>& records) {
  std::vector<std::pair<std::string, std::string>> order;
  std::map<std::pair<std::string, std::string>, std::vector<const EpisodeRecord*>> groups;
  for (const EpisodeRecord& r : records) {
    auto key = std::make_pair(r.map_id, r.model_id);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&r);
  }

  std::vector<SummaryRow> rows;
  for (const auto& key : order) {
    const auto& group = groups.at(key);
    SummaryRow row;
    row.map_id = key.first;
    row.model_id = key.second;
    row.episodes = static_cast<int>(group.size());
    std::vector<EpisodeLengths> lengths;
    int successes = 0;
    for (const EpisodeRecord* r : group) {
      lengths.push_back({r->executed_cr, r->shortest_length, r->executed_pl});
      row.pl += r->executed_pl;
      row.cr_percent += 100.0 * r->executed_cr;
      row.T += r->T;
      row.T_i += r->T_i;
      row.T_d += r->T_d;
      successes += r->success ? 1 : 0;
    }
    const double n = static_cast<double>(group.size());
    row.cpl = cpl(lengths);
    row.pl /= n;
    row.cr_percent /= n;
    row.T /= n;
    row.T_i /= n;
    row.T_d /= n;
    row.success_rate = successes / n;
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_records(std::ostream& out, const std::vector<EpisodeRecord>& records) {
  using nlohmann::ordered_json;
  for (const EpisodeRecord& r : records) {
    ordered_json reasons = ordered_json::array();
    for (RejectionReason reason : r.report.reasons) reasons.push_back(std::string(to_string(reason)));
    ordered_json j;
    j["map"] = r.map_id;
    j["model"] = r.model_id;
    j["seed"] = r.seed;
    j["start"] = to_string(r.start);
    j["path"] = r.path.empty() ? std::string() : format_waypoints(r.path);
    j["report"] = {{"coverage_rate", r.report.coverage_rate},   {"path_length", r.report.path_length},
                   {"turn_count", r.report.turn_count},         {"shortest_length", r.report.shortest_length},
                   {"cpl_term", r.report.cpl_term},             {"accepted", r.report.accepted},
                   {"reasons", reasons}};
    j["shortest_length"] = r.shortest_length;
    j["executed_cr"] = r.executed_cr;
    j["executed_pl"] = r.executed_pl;
    j["cpl_term"] = r.cpl_term();
    j["attempts"] = r.attempts;
    j["T_i"] = r.T_i;
    j["T_d"] = r.T_d;
    j["T"] = r.T;
    j["success"] = r.success;
    j["failure_kind"] = r.failure_kind ? ordered_json(std::string(to_string(*r.failure_kind))) : ordered_json(nullptr);
    if (!r.failure_message.empty()) j["failure_message"] = r.failure_message;
    out << j.dump() << '\n';
  }
}

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string file_stem(std::string s) {
  for (char& c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '.';
    if (!ok) c = '_';
  }
  return s;
}

}  // namespace

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::string out = "map,model,N,CPL,PL,CR,success_rate,T,Ti,Td\n";
  for (const SummaryRow& r : rows) {
    out += csv_field(r.map_id) + "," + csv_field(r.model_id) + "," + std::to_string(r.episodes) + "," +
           fmt("%.4f", r.cpl) + "," + fmt("%.2f", r.pl) + "," + fmt("%.2f", r.cr_percent) + "," +
           fmt("%.4f", r.success_rate) + "," + fmt("%.3f", r.T) + "," + fmt("%.3f", r.T_i) + "," +
           fmt("%.3f", r.T_d) + "\n";
  }
  return out;
}

std::string summary_table(const std::vector<SummaryRow>& rows) {
  const std::vector<std::string> header = {"map", "model", "N", "CPL", "PL", "CR%", "success", "T", "Ti", "Td"};
  std::vector<std::vector<std::string>> cells = {header};
  for (const SummaryRow& r : rows) {
    cells.push_back({r.map_id, r.model_id, std::to_string(r.episodes), fmt("%.4f", r.cpl), fmt("%.2f", r.pl),
                     fmt("%.2f", r.cr_percent), fmt("%.2f", r.success_rate), fmt("%.3f", r.T), fmt("%.3f", r.T_i),
                     fmt("%.3f", r.T_d)});
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& line : cells) {
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
  }
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    std::string line;
    for (std::size_t c = 0; c < cells[i].size(); ++c) {
      const std::string& s = cells[i][c];
      const std::string pad(width[c] - s.size(), ' ');
      // Text columns flush left, numbers flush right.
      line += c < 2 ? s + pad : pad + s;
      if (c + 1 < cells[i].size()) line += "  ";
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
    if (i == 0) {
      std::size_t total = 0;
      for (std::size_t w : width) total += w;
      out += std::string(total + 2 * (width.size() - 1), '-') + "\n";
    }
  }
  return out;
}

void write_outputs(const std::filesystem::path& dir, const ExperimentSummary& summary, const std::vector<MapSpec>& maps,
                   bool renders) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());

  auto write_file = [](const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  };

  std::ostringstream records;
  write_records(records, summary.records);
  write_file(dir / "episodes.jsonl", records.str());
  write_file(dir / "summary.csv", summary_csv(summary.rows));
  write_file(dir / "summary.txt", summary_table(summary.rows));

  if (!renders) return;
  const std::filesystem::path render_dir = dir / "renders";
  std::filesystem::create_directories(render_dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + render_dir.string() + ": " + ec.message());
  std::map<std::pair<std::string, std::string>, int> counter;
  for (const EpisodeRecord& r : summary.records) {
    const int ep = counter[{r.map_id, r.model_id}]++;
    if (r.path.empty()) continue;
    const auto spec = std::find_if(maps.begin(), maps.end(), [&](const MapSpec& m) { return m.id == r.map_id; });
    if (spec == maps.end()) continue;
    const std::string name = file_stem(r.map_id) + "_" + file_stem(r.model_id) + "_" + std::to_string(ep) + ".svg";
    write_file(render_dir / name, render_path(*spec->map, r.path, r.trajectory));
  }
}

}  // namespace coverpath
