#include <gtest/gtest.h>

#include "coverpath/experiment_config.hpp"

namespace coverpath {
namespace {

const std::filesystem::path kData = COVERPATH_DATA_DIR;

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::IoError;
}

TEST(ExperimentConfig, MinimalDefaults) {
  const ExperimentConfig c = parse_experiment_config(
      R"({"maps": ["free5"], "providers": [{"model": "o", "generator": "optimal"}]})", {});
  ASSERT_EQ(c.maps.size(), 1u);
  EXPECT_EQ(c.maps[0].id, "free5");
  ASSERT_EQ(c.providers.size(), 1u);
  EXPECT_EQ(c.providers[0].model_id, "o");
  EXPECT_EQ(c.options.episodes_per_cell, 10);
  EXPECT_EQ(c.options.workers, 1);
  EXPECT_EQ(c.options.base_seed, 0u);
  EXPECT_FALSE(c.frozen_clock);
  EXPECT_TRUE(c.render);
  EXPECT_FALSE(c.episode.follower.has_value());
  EXPECT_EQ(c.episode.planner.max_iterations, 5);
}

TEST(ExperimentConfig, EverySection) {
  const ExperimentConfig c = parse_experiment_config(R"({
    "seed": 99, "episodes": 3, "workers": 2, "clock": "frozen", "render": false,
    "maps": [
      {"id": "tiny", "width": 3, "height": 2, "cell_size": 0.5, "obstacles": [[1, 1]],
       "unknown_obstacles": [[0.1, 0.1, 0.2, 0.2]]},
      {"builtin": "pillars7"},
      {"file": "maps/free3.txt"}
    ],
    "providers": [
      {"model": "scripted-good", "script": "fixtures/good.txt"},
      {"model": "inline", "label": "inline-label", "responses": ["0,0|0,1"]}
    ],
    "planner": {"max_iterations": 2, "temperature": 0.2, "min_coverage": 0.9, "max_length_ratio": 1.5,
                "feedback": false},
    "follower": {"method": "dog_curve", "lookahead": 0.25},
    "motion": {"linear_speed": 0.4, "angular_speed": 1.0, "dt": 0.02},
    "odometry": {"sigma_xy": 0.001, "sigma_heading": 0.002},
    "safety_radius_cells": 0.1, "max_range": 3.0
  })", kData);
  EXPECT_EQ(c.options.base_seed, 99u);
  EXPECT_EQ(c.options.episodes_per_cell, 3);
  EXPECT_EQ(c.options.workers, 2);
  EXPECT_TRUE(c.frozen_clock);
  EXPECT_DOUBLE_EQ(c.episode.clock(), 0.0);
  EXPECT_FALSE(c.render);

  ASSERT_EQ(c.maps.size(), 3u);
  EXPECT_EQ(c.maps[0].id, "tiny");
  EXPECT_EQ(c.maps[0].map->free_count(), 5u);
  EXPECT_DOUBLE_EQ(c.maps[0].map->cell_size(), 0.5);
  ASSERT_EQ(c.maps[0].unknown_obstacles.size(), 1u);
  EXPECT_DOUBLE_EQ(c.maps[0].unknown_obstacles[0].max_y, 0.2);
  EXPECT_EQ(c.maps[1].id, "pillars7");
  EXPECT_EQ(c.maps[2].id, "free3");
  EXPECT_EQ(c.maps[2].map->free_count(), 9u);

  EXPECT_EQ(c.providers[0].model_id, "scripted-good");
  EXPECT_EQ(c.providers[1].model_id, "inline-label");
  auto p = c.providers[1].factory(*c.maps[0].map, {0, 0});
  EXPECT_EQ(p->complete(ChatRequest{"", {"x"}, 0.6, ""}).text, "0,0|0,1");

  EXPECT_EQ(c.episode.planner.max_iterations, 2);
  EXPECT_DOUBLE_EQ(c.episode.planner.temperature, 0.2);
  EXPECT_FALSE(c.episode.planner.feedback_on_reject);
  ASSERT_TRUE(c.episode.planner.thresholds.has_value());
  EXPECT_DOUBLE_EQ(c.episode.planner.thresholds->min_coverage, 0.9);
  EXPECT_EQ(c.episode.planner.thresholds_for(GridMap::rectangle(5, 5)).max_turns, 20);
  ASSERT_TRUE(c.episode.follower.has_value());
  EXPECT_EQ(c.episode.follower->method, FollowMethod::DogCurve);
  EXPECT_DOUBLE_EQ(c.episode.follower->lookahead, 0.25);
  EXPECT_DOUBLE_EQ(c.episode.follower->reach_threshold, 0.05);  // first map has 0.5 m cells
  EXPECT_DOUBLE_EQ(c.episode.limits.dt, 0.02);
  EXPECT_DOUBLE_EQ(c.episode.odometry_sigma_heading, 0.002);
  EXPECT_DOUBLE_EQ(c.episode.safety_radius_cells, 0.1);
  EXPECT_DOUBLE_EQ(c.episode.max_range, 3.0);
}

TEST(ExperimentConfig, Errors) {
  const auto parse = [](const std::string& text) { return [text] { parse_experiment_config(text, kData); }; };
  const std::string ok_provider = R"("providers": [{"model": "o", "generator": "optimal"}])";
  EXPECT_EQ(code_of(parse("not json")), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of(parse("{" + ok_provider + "}")), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of(parse(R"({"maps": ["free5"], "providers": []})")), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of(parse(R"({"maps": ["nowhere"], )" + ok_provider + "}")), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of(parse(R"({"maps": ["free5", "free5"], )" + ok_provider + "}")), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of(parse(R"({"maps": ["free5"], "bogus": 1, )" + ok_provider + "}")), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of(parse(R"({"maps": ["free5"], "episodes": 0, )" + ok_provider + "}")), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of(parse(R"({"maps": ["free5"], "clock": "sundial", )" + ok_provider + "}")),
            ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of(parse(R"({"maps": ["free5"], "seed": "abc", )" + ok_provider + "}")), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of(parse(R"({"maps": ["free5"], "providers": [{"model": "o"}]})")), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of(parse(R"({"maps": ["free5"], "providers": [{"model": "o", "generator": "pessimal"}]})")),
            ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of(parse(R"({"maps": ["free5"], "providers": [{"model": "o", "kind": "carrier-pigeon"}]})")),
            ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of(parse(R"({"maps": ["free5"], "planner": {"temperature": 3}, )" + ok_provider + "}")),
            ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of(parse(R"({"maps": ["free5"], "motion": {"dt": 0.5}, )" + ok_provider + "}")),
            ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of(parse(R"({"maps": ["free5"], "follower": {"method": "hover"}, )" + ok_provider + "}")),
            ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of(parse(R"({"maps": [{"builtin": "free5", "width": 3}], )" + ok_provider + "}")),
            ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of(parse(R"({"maps": [{"id": "x", "width": 3, "height": 3, "unknown_obstacles": [[1, 1, 0, 0]]}], )" +
                          ok_provider + "}")),
            ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of(parse(R"({"maps": [{"file": "maps/absent.txt"}], )" + ok_provider + "}")), ErrorCode::IoError);
  EXPECT_EQ(code_of([] { load_experiment_config(kData / "configs" / "absent.json"); }), ErrorCode::IoError);
}

TEST(ExperimentConfig, BundledConfigsLoad) {
  const ExperimentConfig demo = load_experiment_config(kData / "configs" / "demo.json");
  EXPECT_EQ(demo.maps.size(), 3u);
  EXPECT_TRUE(demo.frozen_clock);
  const ExperimentConfig obstacles = load_experiment_config(kData / "configs" / "obstacles.json");
  EXPECT_EQ(obstacles.maps.size(), 3u);
  EXPECT_EQ(obstacles.episode.follower->method, FollowMethod::DogCurve);
  // Live providers construct without contacting the network.
  const ExperimentConfig live = load_experiment_config(kData / "configs" / "live.json");
  EXPECT_EQ(live.providers.size(), 3u);
}

}  // namespace
}  // namespace coverpath
