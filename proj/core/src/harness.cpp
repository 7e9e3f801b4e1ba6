#include "sofpid/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <thread>
#include <variant>

#include <fmt/format.h>

#include "sofpid/errors.hpp"
#include "sofpid/sofpid_controller.hpp"
#include "sofpid/ts_fuzzy.hpp"

namespace sofpid::harness {
namespace {

// An episode whose measured distance leaves this multiple of the start
// distance is counted as diverged and cut short.
constexpr double kRunawayFactor = 10.0;

struct StepOut {
  double u{0.0};
  control::ErrorSignals signals;
  std::optional<double> u_hat;
  std::optional<int> rules_control;
  std::optional<int> rules_reference;
};

using AnyController =
    std::variant<control::PidController, baseline::TsFuzzyController, control::SofPidController>;

AnyController make_controller(const RunConfig& config) {
  const auto orientation = control::ErrorOrientation::kDistancePositive;
  switch (config.controller) {
    case ControllerKind::kPid:
      return control::PidController(config.gains, orientation);
    case ControllerKind::kTsFuzzy: {
      const double eps_max = config.scenario.path_length();
      auto rb = config.scenario.ts_rulebase.value_or(baseline::TsRuleBase::standard(eps_max, eps_max));
      return baseline::TsFuzzyController(rb, orientation);
    }
    case ControllerKind::kSofPid: {
      control::SofPidConfig sc;
      sc.prime_steps = config.prime_steps;
      sc.prime_gains = config.gains;
      sc.orientation = orientation;
      return control::SofPidController(sc);
    }
  }
  throw ConfigError("unknown controller kind");
}

StepOut step_controller(AnyController& c, double r, double y) {
  return std::visit(
      [&](auto& ctl) -> StepOut {
        using T = std::decay_t<decltype(ctl)>;
        StepOut out;
        if constexpr (std::is_same_v<T, control::SofPidController>) {
          const auto s = ctl.step(r, y);
          out.u = s.u;
          out.signals = s.signals;
          out.u_hat = s.u_hat;
          if (s.phase == control::Phase::kRunning) {
            out.rules_control = static_cast<int>(ctl.control_rule_count());
            out.rules_reference = static_cast<int>(ctl.reference_rule_count());
          }
        } else {
          out.u = ctl.step(r, y);
          out.signals = ctl.last_signals();
        }
        return out;
      },
      c);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
}

}  // namespace

ControllerKind controller_from_name(const std::string& name) {
  if (name == "pid") return ControllerKind::kPid;
  if (name == "ts" || name == "ts_fuzzy") return ControllerKind::kTsFuzzy;
  if (name == "sofpid") return ControllerKind::kSofPid;
  throw ConfigError("unknown controller '" + name + "' (expected pid, ts or sofpid)");
}

const char* controller_name(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::kPid: return "pid";
    case ControllerKind::kTsFuzzy: return "ts";
    case ControllerKind::kSofPid: return "sofpid";
  }
  return "?";
}

std::vector<std::uint64_t> default_seeds(int count) {
  std::vector<std::uint64_t> seeds;
  for (int i = 1; i <= count; ++i) seeds.push_back(static_cast<std::uint64_t>(i));
  return seeds;
}

void RunConfig::validate() const {
  scenario.validate();
  if (seeds.empty()) throw ConfigError("run: at least one seed is required");
  if (!(convergence_tol > 0.0)) throw ConfigError("run: convergence_tol must be > 0");
  if (step_limit() < 1) throw ConfigError("run: max_steps must be >= 1");
  if (controller == ControllerKind::kSofPid && prime_steps < 2) {
    throw ConfigError("run: prime_steps must be >= 2");
  }
}

plant::Scenario resolve_scenario(const std::string& name_or_path) {
  if (std::filesystem::path(name_or_path).extension() == ".json") {
    return plant::load_scenario_file(name_or_path);
  }
  return plant::find_scenario(name_or_path);
}

EpisodeResult run_episode(const RunConfig& config, std::uint64_t seed) {
  config.validate();
  const auto& sc = config.scenario;
  const int limit = config.step_limit();

  EpisodeResult result;
  result.seed = seed;
  result.trace.reserve(static_cast<std::size_t>(limit));

  plant::Rng rng(seed);
  AnyController controller = make_controller(config);
  plant::PlantState state = plant::plant_reset(sc, rng);

  for (int step = 1; step <= limit; ++step) {
    const StepOut out = step_controller(controller, sc.setpoint, state.y);
    result.trace.push_back(TraceRecord{step, sc.setpoint, state.y, out.signals.eps,
                                       out.signals.sigma, out.signals.delta, out.u, out.u_hat,
                                       out.rules_control, out.rules_reference});
    if (state.stopped) break;
    state = plant::plant_step(state, out.u, sc, rng);
    if (!std::isfinite(state.y) || std::fabs(state.y) > kRunawayFactor * sc.initial_distance) {
      result.diverged = true;
      break;
    }
  }

  result.metrics = compute_metrics(result.trace, config.convergence_tol, limit);
  if (const auto* sof = std::get_if<control::SofPidController>(&controller)) {
    result.rules = control::dump_rules(*sof);
    result.session = sof->to_json();
  }
  return result;
}

MonteCarloResult monte_carlo(const RunConfig& config) {
  config.validate();
  const std::size_t n = config.seeds.size();
  MonteCarloResult result;
  result.episodes.resize(n);
  std::vector<std::exception_ptr> errors(n);

  unsigned workers = config.workers > 0 ? static_cast<unsigned>(config.workers)
                                        : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(n));

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        result.episodes[i] = run_episode(config, config.seeds[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      throw std::runtime_error(fmt::format("seed {}: {}", config.seeds[i], e.what()));
    }
  }

  std::vector<EpisodeMetrics> metrics;
  metrics.reserve(n);
  for (const auto& ep : result.episodes) metrics.push_back(ep.metrics);
  result.aggregate = aggregate(metrics);
  return result;
}

std::vector<SweepRow> n_sweep(const RunConfig& base, const std::vector<int>& n_values) {
  std::vector<SweepRow> rows;
  auto collect = [](const MonteCarloResult& mc) {
    std::vector<int> steps;
    for (const auto& ep : mc.episodes) steps.push_back(ep.metrics.steps_to_converge);
    return steps;
  };
  for (int n : n_values) {
    RunConfig cfg = base;
    cfg.controller = ControllerKind::kSofPid;
    cfg.prime_steps = n;
    const auto mc = monte_carlo(cfg);
    rows.push_back({fmt::format("sofpid N={}", n), n, collect(mc), mc.aggregate});
  }
  RunConfig pid = base;
  pid.controller = ControllerKind::kPid;
  const auto mc = monte_carlo(pid);
  rows.push_back({"pid", std::nullopt, collect(mc), mc.aggregate});
  return rows;
}

nlohmann::json to_json(const std::vector<SweepRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    out.push_back({{"label", r.label},
                   {"prime_steps", r.prime_steps ? nlohmann::json(*r.prime_steps) : nlohmann::json()},
                   {"steps_to_converge", r.steps_to_converge},
                   {"aggregate", to_json(r.metrics)}});
  }
  return out;
}

void write_run_outputs(const RunConfig& config, const MonteCarloResult& result,
                       const std::string& out_dir) {
  namespace fs = std::filesystem;
  const fs::path dir(out_dir);
  fs::create_directories(dir);

  nlohmann::json per_seed = nlohmann::json::array();
  for (const auto& ep : result.episodes) {
    write_file(dir / fmt::format("trace_{}.csv", ep.seed), trace_to_csv(ep.trace));
    auto m = to_json(ep.metrics);
    m["seed"] = ep.seed;
    m["diverged"] = ep.diverged;
    per_seed.push_back(std::move(m));
    if (ep.session) {
      write_file(dir / fmt::format("session_{}.json", ep.seed), ep.session->dump(2) + "\n");
    }
  }

  // gnuplot -p plot.gp
  std::string gp = "set datafile separator ','\nset key autotitle columnhead\nset xlabel 'step'\n"
                   "set multiplot layout 2,1\nset ylabel 'y (m)'\nplot ";
  std::string eps_plot = "set ylabel 'eps (m)'\nplot ";
  for (std::size_t i = 0; i < result.episodes.size(); ++i) {
    const auto file = fmt::format("trace_{}.csv", result.episodes[i].seed);
    const char* sep = i + 1 < result.episodes.size() ? ", \\\n  " : "\n";
    gp += fmt::format("'{}' using 1:3 with lines title 'seed {}'{}", file, result.episodes[i].seed, sep);
    eps_plot += fmt::format("'{}' using 1:4 with lines notitle{}", file, sep);
  }
  write_file(dir / "plot.gp", gp + eps_plot + "unset multiplot\n");

  nlohmann::json metrics{{"scenario", config.scenario.name},
                         {"controller", controller_name(config.controller)},
                         {"convergence_tol", config.convergence_tol},
                         {"max_steps", config.step_limit()},
                         {"per_seed", std::move(per_seed)},
                         {"aggregate", to_json(result.aggregate)}};
  if (config.controller == ControllerKind::kSofPid) metrics["prime_steps"] = config.prime_steps;
  write_file(dir / "metrics.json", metrics.dump(2) + "\n");

  if (!result.episodes.empty() && result.episodes.front().rules) {
    const auto& listing = *result.episodes.front().rules;
    write_file(dir / "rules_control.json",
               control::rules_to_json(listing.control, true).dump(2) + "\n");
    write_file(dir / "rules_reference.json",
               control::rules_to_json(listing.reference, false).dump(2) + "\n");
  }
}

}  // namespace sofpid::harness
