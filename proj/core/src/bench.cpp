#include "sofpid/bench.hpp"

#include <algorithm>
#include <chrono>
#include <random>

#include "sofpid/errors.hpp"

namespace sofpid::harness {
namespace {
// Written after the timed loops so they cannot be optimised away.
volatile double bench_sink = 0.0;
}  // namespace

double BenchTable::end_to_end_ratio() const {
  if (rows.size() < 2 || rows.front().ns_per_step <= 0.0) return 0.0;
  return rows.back().ns_per_step / rows.front().ns_per_step;
}

almmo::AlmmoModel make_pinned_model(int input_dim, int rules, std::uint64_t seed) {
  if (input_dim < 1 || rules < 1) throw ConfigError("bench: input_dim and rules must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  auto draw = [&] {
    almmo::Vector v(input_dim);
    for (int i = 0; i < input_dim; ++i) v[i] = coord(rng);
    return v;
  };
  almmo::EngineConfig cfg;
  cfg.input_dim = input_dim;
  cfg.structure_mode = almmo::StructureMode::kAssignOnly;
  auto model = almmo::AlmmoModel::from_first_sample(cfg, draw());
  for (int m = 1; m < rules; ++m) model.append_rule(draw());
  return model;
}

BenchTable bench_complexity(int input_dim, const std::vector<int>& rule_counts, int steps_per_rep,
                            int reps, std::uint64_t seed) {
  using clock = std::chrono::steady_clock;
  if (steps_per_rep < 1 || reps < 1) throw ConfigError("bench: steps and reps must be >= 1");

  // One fixed input stream shared by every rule count.
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  std::vector<almmo::Vector> inputs;
  std::vector<double> targets;
  for (int i = 0; i < steps_per_rep; ++i) {
    almmo::Vector v(input_dim);
    for (int k = 0; k < input_dim; ++k) v[k] = coord(rng);
    targets.push_back(v.sum() + 0.1);
    inputs.push_back(std::move(v));
  }

  BenchTable table;
  table.input_dim = input_dim;
  double sink = 0.0;
  {
    // Warm-up pass so the first row is not measured on a cold cache.
    auto model = make_pinned_model(input_dim, rule_counts.empty() ? 1 : rule_counts.front(), seed);
    for (int i = 0; i < steps_per_rep; ++i) {
      sink += model.learn_step(inputs[static_cast<std::size_t>(i)], targets[static_cast<std::size_t>(i)]);
    }
  }
  for (int rules : rule_counts) {
    std::vector<double> samples;
    for (int rep = 0; rep < reps; ++rep) {
      auto model = make_pinned_model(input_dim, rules, seed);
      const auto start = clock::now();
      for (int i = 0; i < steps_per_rep; ++i) {
        sink += model.learn_step(inputs[static_cast<std::size_t>(i)], targets[static_cast<std::size_t>(i)]);
      }
      const std::chrono::duration<double, std::nano> elapsed = clock::now() - start;
      samples.push_back(elapsed.count() / steps_per_rep);
    }
    std::nth_element(samples.begin(), samples.begin() + reps / 2, samples.end());
    table.rows.push_back({rules, samples[static_cast<std::size_t>(reps / 2)]});
  }
  bench_sink = sink;

  const double n = static_cast<double>(table.rows.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& r : table.rows) {
    sx += r.rules;
    sy += r.ns_per_step;
    sxx += static_cast<double>(r.rules) * r.rules;
    sxy += r.rules * r.ns_per_step;
  }
  const double denom = n * sxx - sx * sx;
  if (denom != 0.0) {
    table.slope_ns_per_rule = (n * sxy - sx * sy) / denom;
    table.intercept_ns = (sy - table.slope_ns_per_rule * sx) / n;
  }
  return table;
}

nlohmann::json to_json(const BenchTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : table.rows) rows.push_back({{"rules", r.rules}, {"ns_per_step", r.ns_per_step}});
  return {{"input_dim", table.input_dim},
          {"rows", rows},
          {"slope_ns_per_rule", table.slope_ns_per_rule},
          {"intercept_ns", table.intercept_ns},
          {"ratio_last_first", table.end_to_end_ratio()}};
}

}  // namespace sofpid::harness
