#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "coverpath/metrics.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace coverpath {
namespace {

using testing::Rng;

WaypointPath P(std::initializer_list<CellCoord> c) { return {c}; }

TEST(CoverageRate, Examples) {
  const GridMap m2 = GridMap::rectangle(2, 2);
  EXPECT_DOUBLE_EQ(coverage_rate(m2, P({{0, 0}, {0, 1}, {1, 1}, {1, 0}})), 1.0);
  EXPECT_DOUBLE_EQ(coverage_rate(m2, P({{0, 0}, {0, 1}})), 0.5);
  const GridMap m3 = GridMap::rectangle(3, 3);
  EXPECT_DOUBLE_EQ(coverage_rate(m3, P({{0, 0}, {2, 0}})), 3.0 / 9.0);
}

TEST(CoverageRate, InvalidPath) {
  const GridMap m = GridMap(3, 3, {{1, 1}});
  EXPECT_THROW(coverage_rate(m, P({{0, 0}, {1, 1}})), Error);
  EXPECT_THROW(coverage_rate(m, WaypointPath{}), Error);
}

TEST(ExpandPath, BridgesThroughFirstFoundRoute) {
  const GridMap m3 = GridMap::rectangle(3, 3);
  EXPECT_EQ(expand_path(m3, P({{0, 0}, {2, 0}})), (std::vector<CellCoord>{{0, 0}, {1, 0}, {2, 0}}));
}

TEST(PathLength, Examples) {
  const GridMap m3 = GridMap::rectangle(3, 3);
  EXPECT_DOUBLE_EQ(path_length(m3, P({{1, 1}})), 0.0);
  EXPECT_DOUBLE_EQ(path_length(m3, P({{0, 0}, {0, 1}, {1, 1}})), 2.0);
  EXPECT_DOUBLE_EQ(path_length(m3, P({{0, 0}, {2, 2}})), 4.0);
  const GridMap half = GridMap::rectangle(3, 3, 0.5);
  EXPECT_DOUBLE_EQ(path_length(half, P({{0, 0}, {2, 2}})), 2.0);
}

TEST(TurnCount, Examples) {
  EXPECT_EQ(turn_count(P({{0, 0}, {0, 1}, {0, 2}})), 0);
  EXPECT_EQ(turn_count(P({{0, 0}, {0, 1}, {1, 1}})), 1);
  EXPECT_EQ(turn_count(P({{0, 0}, {0, 1}, {0, 2}, {1, 2}, {1, 1}, {1, 0}, {2, 0}, {2, 1}, {2, 2}})), 4);
  EXPECT_EQ(turn_count(P({{0, 0}})), 0);
  EXPECT_EQ(turn_count(P({{0, 0}, {0, 1}, {0, 0}})), 1);  // reversal
}

TEST(TurnCount, RequiresUnitSteps) {
  try {
    turn_count(P({{0, 0}, {2, 0}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidPath);
  }
}

TEST(ShortestCoverageLength, Examples) {
  EXPECT_DOUBLE_EQ(shortest_coverage_length(GridMap::rectangle(5, 5), {0, 0}), 24.0);
  EXPECT_DOUBLE_EQ(shortest_coverage_length(GridMap::rectangle(5, 5), {2, 2}), 24.0);
  EXPECT_DOUBLE_EQ(shortest_coverage_length(GridMap(3, 3, {{1, 1}}), {0, 0}), 7.0);
  EXPECT_DOUBLE_EQ(shortest_coverage_length(GridMap::rectangle(1, 1), {0, 0}), 0.0);
  EXPECT_DOUBLE_EQ(shortest_coverage_length(GridMap::rectangle(4, 4, 0.5), {1, 2}), 7.5);
}

TEST(ShortestCoverageLength, ParityBoundOnOddGrids) {
  // On odd x odd grids the minority colour cannot start a Hamiltonian path;
  // the exact optimum from such starts is one step longer.
  EXPECT_DOUBLE_EQ(shortest_coverage_length(GridMap::rectangle(3, 3), {1, 0}), 9.0);
  EXPECT_EQ(testing::brute_force_coverage_steps(GridMap::rectangle(3, 3), {1, 0}), 9);
  EXPECT_DOUBLE_EQ(shortest_coverage_length(GridMap::rectangle(5, 5), {1, 0}), 25.0);
  EXPECT_DOUBLE_EQ(shortest_coverage_length(GridMap::rectangle(3, 1), {1, 0}), 3.0);
}

TEST(ShortestCoverageLength, Errors) {
  const GridMap m(3, 3, {{1, 1}});
  try {
    shortest_coverage_length(m, {1, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::StartOnObstacle);
  }
  EXPECT_THROW(shortest_coverage_length(m, {5, 5}), Error);
}

TEST(Cpl, Examples) {
  const EpisodeLengths a{1.0, 24, 24};
  const EpisodeLengths b{0.5, 10, 20};
  EXPECT_NEAR(cpl(std::vector{a}), 1.0, 1e-12);
  EXPECT_NEAR(cpl(std::vector{b}), 0.25, 1e-12);
  EXPECT_NEAR(cpl(std::vector{a, b}), 0.625, 1e-12);
}

TEST(Cpl, DegenerateAndEmpty) {
  EXPECT_DOUBLE_EQ(cpl_term(1.0, 0.0, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(cpl_term(0.4, 0.0, 0.0), 0.4);
  EXPECT_DOUBLE_EQ(cpl_term(1.0, 10.0, 5.0), 1.0);  // shorter than the bound is capped
  try {
    cpl(std::vector<EpisodeLengths>{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyEpisodeList);
  }
}

TEST(IsSuccess, BoundaryInclusive) {
  Thresholds th;
  EvaluationReport r;
  r.coverage_rate = 1.0;
  EXPECT_TRUE(is_success(r, th));
  r.coverage_rate = 0.90;
  EXPECT_FALSE(is_success(r, th));
  r.coverage_rate = 0.95;
  EXPECT_TRUE(is_success(r, th));
}

TEST(Thresholds, DefaultsAndValidation) {
  const Thresholds th = Thresholds::defaults_for(GridMap::rectangle(5, 7));
  EXPECT_DOUBLE_EQ(th.min_coverage, 0.95);
  EXPECT_EQ(th.max_turns, 24);
  EXPECT_DOUBLE_EQ(th.max_length_ratio, 2.0);
  Thresholds bad = th;
  bad.min_coverage = 1.5;
  EXPECT_THROW(bad.validate(), Error);
  bad = th;
  bad.max_length_ratio = 0.5;
  EXPECT_THROW(bad.validate(), Error);
  bad = th;
  bad.max_turns = -1;
  EXPECT_THROW(bad.validate(), Error);
}

TEST(MakeReport, ConjunctionOfCriteria) {
  Thresholds th{0.95, 4, 2.0};
  EvaluationReport ok = make_report(1.0, 8, 4, 8, th);
  EXPECT_TRUE(ok.accepted);
  EXPECT_TRUE(ok.reasons.empty());
  EXPECT_DOUBLE_EQ(ok.cpl_term, 1.0);

  EvaluationReport all = make_report(0.5, 17, 5, 8, th);
  EXPECT_FALSE(all.accepted);
  EXPECT_EQ(all.reasons, (std::vector<RejectionReason>{RejectionReason::CoverageBelowThreshold,
                                                        RejectionReason::TooManyTurns, RejectionReason::PathTooLong}));
  EXPECT_TRUE(make_report(1.0, 16, 4, 8, th).accepted);  // ratio boundary inclusive
}

// Properties.

TEST(MetricsProperties, CplBoundedAndPermutationInvariant) {
  Rng rng(21);
  for (int i = 0; i < 500; ++i) {
    std::vector<EpisodeLengths> eps;
    const int n = testing::uniform_int(rng, 1, 12);
    for (int k = 0; k < n; ++k) {
      eps.push_back({testing::uniform_real(rng, 0, 1), testing::uniform_real(rng, 0, 100),
                     testing::uniform_real(rng, 0, 200)});
    }
    const double v = cpl(eps);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    std::shuffle(eps.begin(), eps.end(), rng);
    EXPECT_NEAR(cpl(eps), v, 1e-12);
  }
}

TEST(MetricsProperties, CplIsOneOnlyForFullCoverageAtOrBelowBound) {
  Rng rng(22);
  for (int i = 0; i < 300; ++i) {
    const double l = testing::uniform_real(rng, 1, 50);
    std::vector<EpisodeLengths> eps = {{1.0, l, l * testing::uniform_real(rng, 0.2, 1.0)}};
    EXPECT_DOUBLE_EQ(cpl(eps), 1.0);
    eps.push_back({1.0, l, l * testing::uniform_real(rng, 1.01, 3.0)});
    EXPECT_LT(cpl(eps), 1.0);
    eps = {{testing::uniform_real(rng, 0.0, 0.99), l, l}};
    EXPECT_LT(cpl(eps), 1.0);
  }
}

TEST(MetricsProperties, LengthAtLeastDistinctCellsMinusOne) {
  Rng rng(23);
  for (int i = 0; i < 500; ++i) {
    const GridMap m = testing::random_map(rng, 7, 7, 0.3, 0.5);
    const WaypointPath p = testing::random_sparse_path(rng, m, testing::uniform_int(rng, 1, 10));
    const auto expanded = expand_path(m, p);
    const std::set<CellCoord> distinct(expanded.begin(), expanded.end());
    EXPECT_GE(path_length(m, p) + 1e-12, (static_cast<double>(distinct.size()) - 1) * m.cell_size());
  }
}

TEST(MetricsProperties, TurnCountReverseSymmetric) {
  Rng rng(24);
  for (int i = 0; i < 500; ++i) {
    const GridMap m = testing::random_map(rng);
    WaypointPath p = testing::random_walk(rng, m, testing::uniform_int(rng, 0, 30));
    const int forward = turn_count(p);
    std::reverse(p.cells.begin(), p.cells.end());
    EXPECT_EQ(turn_count(p), forward);
  }
}

TEST(MetricsProperties, ShortestBoundNeverExceedsAnyFullCoverageWalk) {
  Rng rng(25);
  for (int i = 0; i < 200; ++i) {
    const GridMap m = testing::random_map(rng, 4, 4, 0.3);
    if (m.free_count() > 14) continue;
    const CellCoord s = testing::random_free_cell(rng, m);
    const int exact = testing::brute_force_coverage_steps(m, s);
    EXPECT_LE(shortest_coverage_length(m, s), exact * m.cell_size() + 1e-12);
  }
}

TEST(MetricsProperties, MatchesIndependentReimplementation) {
  Rng rng(26);
  for (int i = 0; i < 1000; ++i) {
    const GridMap m = testing::random_map(rng, 8, 8, 0.3, i % 2 ? 1.0 : 0.5);
    const WaypointPath walk = testing::random_walk(rng, m, testing::uniform_int(rng, 0, 40));
    EXPECT_EQ(turn_count(walk), testing::reference_turns(walk.cells));
    EXPECT_DOUBLE_EQ(path_length(m, walk), testing::reference_length(m, walk));
    const WaypointPath sparse = testing::random_sparse_path(rng, m, testing::uniform_int(rng, 1, 8));
    EXPECT_DOUBLE_EQ(path_length(m, sparse), testing::reference_length(m, sparse));
    EXPECT_EQ(turn_count(WaypointPath{expand_path(m, sparse)}), testing::reference_turns(expand_path(m, sparse)));
  }
}

}  // namespace
}  // namespace coverpath
