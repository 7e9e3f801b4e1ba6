#include <cmath>
#include <filesystem>
#include <set>
#include <stdexcept>

#include <gtest/gtest.h>

#include "sofpid/errors.hpp"
#include "sofpid/plant.hpp"
#include "sofpid/ts_fuzzy.hpp"

namespace {

using namespace sofpid::plant;
using namespace sofpid::baseline;

Scenario straight(double start, double setpoint, double gain = 1.0, double bias = 0.0) {
  Scenario s;
  s.name = "test";
  s.initial_distance = start;
  s.setpoint = setpoint;
  s.segments = {{0.0, start - setpoint, gain, bias}};
  s.sensor_noise_sd = 0.0;
  return s;
}

TEST(TsFuzzy, HighShoulderUsesTheHighRuleOnly) {
  const auto rb = TsRuleBase::standard(2.0, 2.0);
  EXPECT_NEAR(ts_fuzzy_output(rb, 5.0, 0.5), 2.0 * 5.0 + 0.02 * 0.5, 1e-12);
}

TEST(TsFuzzy, VeryLowShoulderUsesTheVeryLowRuleOnly) {
  const auto rb = TsRuleBase::standard(2.0, 2.0);
  EXPECT_NEAR(ts_fuzzy_output(rb, -0.7, 0.0), 0.25 * -0.7, 1e-12);
}

TEST(TsFuzzy, MembershipsPartitionTheirRanges) {
  const auto rb = TsRuleBase::standard(3.0, 1.5);
  for (double e = 0.0; e <= 3.0; e += 0.01) {
    double sum = 0.0;
    for (const auto& mf : rb.eps_sets) sum += mf.membership(e);
    EXPECT_NEAR(sum, 1.0, 1e-12) << "eps " << e;
  }
  for (double d = -1.5; d <= 1.5; d += 0.01) {
    EXPECT_NEAR(rb.delta_sets[0].membership(d) + rb.delta_sets[1].membership(d), 1.0, 1e-12);
  }
  EXPECT_DOUBLE_EQ(rb.delta_sets[0].membership(0.0), 0.5);
  EXPECT_DOUBLE_EQ(rb.delta_sets[0].membership(-9.0), 1.0);
  EXPECT_DOUBLE_EQ(rb.delta_sets[1].membership(9.0), 1.0);
}

TEST(TsFuzzy, BlendsNeighbouringRules) {
  // eps halfway between Very Low and Low peaks, delta on the Low/High crossing.
  const auto rb = TsRuleBase::standard(3.0, 1.0);
  const double eps = 0.5;
  const double d = 0.0;
  // VL weight 0.5; Low∧High weight 0.5 * 0.5.
  const double want = (0.5 * (0.25 * eps) + 0.25 * (0.5 * eps)) / 0.75;
  EXPECT_NEAR(ts_fuzzy_output(rb, eps, d), want, 1e-12);
}

TEST(TsFuzzy, NoFiringRuleIsAnError) {
  auto rb = TsRuleBase::standard(1.0, 1.0);
  for (auto& mf : rb.eps_sets) mf = {0.0, 0.1, 0.2, false, false};
  EXPECT_THROW(ts_fuzzy_output(rb, 5.0, 0.0), std::domain_error);
}

TEST(TsFuzzy, ValidationAndJson) {
  auto rb = TsRuleBase::standard(2.0, 1.0);
  EXPECT_NO_THROW(rb.validate());
  const auto back = ts_rulebase_from_json(to_json(rb));
  EXPECT_EQ(to_json(back), to_json(rb));
  rb.eps_sets[1].left = 5.0;
  EXPECT_THROW(rb.validate(), sofpid::ConfigError);
  EXPECT_THROW(TsRuleBase::standard(0.0, 1.0), sofpid::ConfigError);
}

TEST(TsFuzzy, ControllerTracksErrors) {
  TsFuzzyController c(TsRuleBase::standard(2.0, 2.0));
  const double u1 = c.step(1.0, 3.0);
  EXPECT_NEAR(u1, ts_fuzzy_output(c.rulebase(), 2.0, 0.0), 1e-15);
  c.step(1.0, 2.5);
  EXPECT_DOUBLE_EQ(c.last_signals().delta, -0.5);
  EXPECT_THROW(c.step(1.0, NAN), sofpid::InvalidInput);
}

TEST(Plant, FlatStepByHand) {
  const auto sc = straight(3.17, 0.5);
  Rng rng(1);
  auto s = plant_reset(sc, rng);
  EXPECT_DOUBLE_EQ(s.y, 3.17);
  s = plant_step(s, 0.5, sc, rng);
  EXPECT_NEAR(s.y, 3.12, 1e-12);
  EXPECT_FALSE(s.stopped);
  EXPECT_EQ(s.steps, 1);
}

TEST(Plant, BumpStepByHand) {
  const auto sc = straight(3.17, 0.5, 0.5);
  Rng rng(1);
  const auto s = plant_step(plant_reset(sc, rng), 0.5, sc, rng);
  EXPECT_NEAR(s.y, 3.145, 1e-12);
}

TEST(Plant, StopsAtTheSetpointAndIgnoresFurtherCommands) {
  const auto sc = straight(0.6, 0.5);
  Rng rng(1);
  auto s = plant_step(plant_reset(sc, rng), 1.1, sc, rng);
  EXPECT_NEAR(s.y, 0.49, 1e-12);
  EXPECT_TRUE(s.stopped);
  EXPECT_TRUE(s.crossed);
  EXPECT_FALSE(s.warning);
  const auto after = plant_step(s, 1.0, sc, rng);
  EXPECT_TRUE(after.warning);
  EXPECT_EQ(after.y, s.y);
  EXPECT_EQ(after.position, s.position);
  EXPECT_EQ(after.steps, s.steps);
}

TEST(Plant, CommandsAreSaturated) {
  const auto sc = straight(5.0, 0.5, 0.7);
  Rng rng(1);
  const auto s0 = plant_reset(sc, rng);
  EXPECT_NEAR(plant_step(s0, 100.0, sc, rng).position, sc.u_max * 0.7 * sc.dt, 1e-15);
  EXPECT_EQ(plant_step(s0, -3.0, sc, rng).position, 0.0);
  EXPECT_THROW(plant_step(s0, NAN, sc, rng), sofpid::InvalidInput);
}

TEST(Plant, BiasActsWithoutCommand) {
  const auto sc = straight(5.0, 0.5, 1.0, -0.05);
  Rng rng(1);
  EXPECT_NEAR(plant_step(plant_reset(sc, rng), 0.0, sc, rng).position, -0.005, 1e-15);
}

TEST(Plant, MonotoneApproachWithoutNoise) {
  for (const auto& base : scenario_catalog()) {
    if (base.name == "s4") continue;  // slopes add a signed bias
    auto sc = base;
    sc.sensor_noise_sd = 0.0;
    Rng rng(1);
    auto s = plant_reset(sc, rng);
    std::mt19937_64 cmd_rng(4);
    std::uniform_real_distribution<double> cmd(0.0, 2.0);
    while (!s.stopped && s.steps < 1000) {
      const double prev = s.y;
      s = plant_step(s, cmd(cmd_rng), sc, rng);
      ASSERT_LE(s.y, prev) << sc.name;
    }
  }
}

TEST(Plant, DeterministicPerSeed) {
  const auto sc = find_scenario("s3");
  auto run = [&](std::uint64_t seed) {
    Rng rng(seed);
    auto s = plant_reset(sc, rng);
    std::vector<double> ys{s.y};
    for (int k = 0; k < 50; ++k) {
      s = plant_step(s, 0.3, sc, rng);
      ys.push_back(s.y);
    }
    return ys;
  };
  EXPECT_EQ(run(7), run(7));
  EXPECT_NE(run(7), run(8));
}

TEST(Catalog, FiveScenariosWithTheirDistances) {
  const auto cat = scenario_catalog();
  ASSERT_EQ(cat.size(), 5u);
  const std::vector<std::tuple<std::string, double, double>> want{
      {"sim", 3.0, 1.0}, {"s1", 3.17, 0.5}, {"s2", 3.17, 0.5}, {"s3", 4.07, 0.5}, {"s4", 5.0, 0.5}};
  for (std::size_t i = 0; i < cat.size(); ++i) {
    EXPECT_EQ(cat[i].name, std::get<0>(want[i]));
    EXPECT_DOUBLE_EQ(cat[i].initial_distance, std::get<1>(want[i]));
    EXPECT_DOUBLE_EQ(cat[i].setpoint, std::get<2>(want[i]));
    EXPECT_NO_THROW(cat[i].validate());
  }
}

TEST(Catalog, SurfaceFeatures) {
  auto gains = [](const Scenario& s) {
    std::set<double> g;
    for (const auto& seg : s.segments) g.insert(seg.gain);
    return g;
  };
  auto count_gain = [](const Scenario& s, double gain) {
    int n = 0;
    for (const auto& seg : s.segments) n += seg.gain == gain ? 1 : 0;
    return n;
  };
  EXPECT_EQ(count_gain(find_scenario("s1"), 0.4), 1);
  EXPECT_EQ(count_gain(find_scenario("s2"), 0.4), 2);
  const auto s3 = find_scenario("s3");
  EXPECT_GE(s3.segments.size(), 2u);
  EXPECT_GE(gains(s3).size(), 2u);
  const auto s4 = find_scenario("s4");
  EXPECT_GT(s4.segments.front().bias, 0.0);
  EXPECT_LT(s4.segments.back().bias, 0.0);
}

TEST(Catalog, SegmentsTileEachPath) {
  for (const auto& sc : scenario_catalog()) {
    double cursor = 0.0;
    for (const auto& seg : sc.segments) {
      EXPECT_NEAR(seg.start_pos, cursor, 1e-12) << sc.name;
      cursor = seg.end_pos;
    }
    EXPECT_NEAR(cursor, sc.path_length(), 1e-12) << sc.name;
  }
}

TEST(Catalog, InvalidScenariosAreRejected) {
  auto gap = straight(3.0, 1.0);
  gap.segments = {{0.0, 1.0, 1.0, 0.0}, {1.1, 2.0, 1.0, 0.0}};
  EXPECT_THROW(gap.validate(), sofpid::ConfigError);
  auto short_path = straight(3.0, 1.0);
  short_path.segments = {{0.0, 1.5, 1.0, 0.0}};
  EXPECT_THROW(short_path.validate(), sofpid::ConfigError);
  auto inverted = straight(3.0, 1.0);
  inverted.setpoint = 4.0;
  EXPECT_THROW(inverted.validate(), sofpid::ConfigError);
  EXPECT_THROW(find_scenario("mars"), sofpid::ConfigError);
  EXPECT_THROW(load_scenario_file("/nonexistent/x.json"), sofpid::ConfigError);
  EXPECT_THROW(scenario_from_json(nlohmann::json{{"name", "x"}}), sofpid::ConfigError);
}

TEST(Catalog, JsonRoundTrip) {
  for (const auto& sc : scenario_catalog()) {
    const auto j = to_json(sc);
    EXPECT_EQ(to_json(scenario_from_json(j)), j) << sc.name;
  }
  auto with_ts = straight(3.0, 1.0);
  with_ts.ts_rulebase = TsRuleBase::standard(2.0, 2.0);
  EXPECT_EQ(to_json(scenario_from_json(to_json(with_ts))), to_json(with_ts));
}

TEST(Catalog, ShippedFilesMatchTheCatalog) {
  const std::filesystem::path dir(SOFPID_SCENARIO_DIR);
  for (const auto& sc : scenario_catalog()) {
    const auto file = dir / (sc.name + ".json");
    ASSERT_TRUE(std::filesystem::exists(file)) << file;
    EXPECT_EQ(to_json(load_scenario_file(file.string())), to_json(sc)) << sc.name;
  }
}

}  // namespace
