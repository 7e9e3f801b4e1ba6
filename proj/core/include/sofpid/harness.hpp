#ifndef SOFPID_HARNESS_HPP
#define SOFPID_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sofpid/metrics.hpp"
#include "sofpid/pid.hpp"
#include "sofpid/plant.hpp"
#include "sofpid/rule_dump.hpp"

namespace sofpid::harness {

enum class ControllerKind { kPid, kTsFuzzy, kSofPid };

/// Accepts "pid", "ts", "ts_fuzzy" and "sofpid"; throws ConfigError otherwise.
ControllerKind controller_from_name(const std::string& name);
const char* controller_name(ControllerKind kind);

std::vector<std::uint64_t> default_seeds(int count = 10);

struct RunConfig {
  plant::Scenario scenario;
  ControllerKind controller{ControllerKind::kSofPid};
  int prime_steps{10};
  control::PidGains gains{};  ///< PID baseline and SOF-PID priming gains
  std::vector<std::uint64_t> seeds{default_seeds()};
  std::optional<int> max_steps;  ///< overrides the scenario's limit
  double convergence_tol{0.02};  ///< m
  int workers{0};                ///< 0 = one per hardware thread

  int step_limit() const { return max_steps.value_or(scenario.max_steps); }
  void validate() const;
};

/// Resolves a catalog name or a path to a scenario JSON file.
plant::Scenario resolve_scenario(const std::string& name_or_path);

struct EpisodeResult {
  std::uint64_t seed{0};
  std::vector<TraceRecord> trace;
  EpisodeMetrics metrics;
  bool diverged{false};  ///< non-finite or runaway plant output
  std::optional<control::RuleListing> rules;  ///< SOF-PID only
  std::optional<nlohmann::json> session;      ///< SOF-PID only
};

/// Closed loop until the plant stops or the step limit is hit. Each step the
/// controller sees the current measurement, the record is written, and the
/// command is applied unless the plant has already stopped.
EpisodeResult run_episode(const RunConfig& config, std::uint64_t seed);

struct MonteCarloResult {
  std::vector<EpisodeResult> episodes;  ///< in seed order
  AggregateMetrics aggregate;
};

/// Runs every seed independently (in parallel) and aggregates. Episode errors
/// are rethrown as std::runtime_error naming the seed.
MonteCarloResult monte_carlo(const RunConfig& config);

struct SweepRow {
  std::string label;             ///< "sofpid N=5", ..., "pid"
  std::optional<int> prime_steps;
  std::vector<int> steps_to_converge;  ///< per seed
  AggregateMetrics metrics;
};

/// One SOF-PID Monte-Carlo per prime length plus a PID baseline row (last).
std::vector<SweepRow> n_sweep(const RunConfig& base, const std::vector<int>& n_values);

nlohmann::json to_json(const std::vector<SweepRow>& rows);

/// Writes trace_<seed>.csv, metrics.json, a gnuplot script plot.gp and, for SOF-PID, session_<seed>.json
/// plus rules_control.json / rules_reference.json of the first seed.
void write_run_outputs(const RunConfig& config, const MonteCarloResult& result,
                       const std::string& out_dir);

}  // namespace sofpid::harness

#endif  // SOFPID_HARNESS_HPP
