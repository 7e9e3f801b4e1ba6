// sofpid: experiment runner for the self-organising fuzzy PID controller.
//
//   sofpid run --scenario sim --controller sofpid --prime-steps 10 --seeds 10 --out out/run
//   sofpid sweep-n --scenario sim --n 5,10,15,20 --out out/sweep
//   sofpid bench --dim 3 --rules 2,4,8,16,32
//   sofpid dump-rules --session out/run/session_1.json
//   sofpid scenarios --out scenarios

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "sofpid/bench.hpp"
#include "sofpid/errors.hpp"
#include "sofpid/harness.hpp"
#include "sofpid/plant.hpp"
#include "sofpid/rule_dump.hpp"
#include "sofpid/sofpid_controller.hpp"

namespace {

using namespace sofpid;

struct CommonRunArgs {
  std::string scenario{"sim"};
  int seeds{10};
  int max_steps{0};
  double tol{0.02};
  double noise{-1.0};
  int workers{0};
  std::string out;
};

void add_common(CLI::App* cmd, CommonRunArgs& a) {
  cmd->add_option("--scenario", a.scenario, "catalog name (sim, s1..s4) or scenario .json file");
  cmd->add_option("--seeds", a.seeds, "number of Monte-Carlo seeds (1..k)")->check(CLI::PositiveNumber);
  cmd->add_option("--steps", a.max_steps, "step limit (default: scenario max_steps)");
  cmd->add_option("--tol", a.tol, "convergence tolerance on |eps| in metres")->check(CLI::PositiveNumber);
  cmd->add_option("--noise", a.noise, "override sensor noise sd in metres");
  cmd->add_option("--workers", a.workers, "parallel episodes (0 = hardware threads)");
  cmd->add_option("--out", a.out, "output directory");
}

harness::RunConfig make_config(const CommonRunArgs& a) {
  harness::RunConfig cfg;
  cfg.scenario = harness::resolve_scenario(a.scenario);
  if (a.noise >= 0.0) cfg.scenario.sensor_noise_sd = a.noise;
  cfg.seeds = harness::default_seeds(a.seeds);
  if (a.max_steps > 0) cfg.max_steps = a.max_steps;
  cfg.convergence_tol = a.tol;
  cfg.workers = a.workers;
  return cfg;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

int cmd_run(const CommonRunArgs& a, const std::string& controller, int prime_steps) {
  auto cfg = make_config(a);
  cfg.controller = harness::controller_from_name(controller);
  cfg.prime_steps = prime_steps;
  const auto result = harness::monte_carlo(cfg);

  fmt::print("scenario {}  controller {}  seeds {}\n", cfg.scenario.name,
             harness::controller_name(cfg.controller), cfg.seeds.size());
  fmt::print("{:>6} {:>8} {:>10} {:>10} {:>12}\n", "seed", "steps", "converged", "overshoot",
             "final|eps|");
  for (const auto& ep : result.episodes) {
    fmt::print("{:>6} {:>8} {:>10} {:>10} {:>12.5f}\n", ep.seed, ep.metrics.steps_to_converge,
               ep.metrics.converged ? "yes" : "no", ep.metrics.overshoot_events,
               ep.metrics.final_abs_error);
  }
  const auto& agg = result.aggregate;
  fmt::print("steps_to_converge mean {:.2f} sd {:.2f}  ({}/{} converged)\n", agg.steps_to_converge.mean,
             agg.steps_to_converge.sd, agg.converged, agg.episodes);
  if (!a.out.empty()) {
    harness::write_run_outputs(cfg, result, a.out);
    fmt::print("outputs written to {}\n", a.out);
  }
  return 0;
}

int cmd_sweep(const CommonRunArgs& a, const std::vector<int>& n_values) {
  auto cfg = make_config(a);
  const auto rows = harness::n_sweep(cfg, n_values);
  fmt::print("{:<14} {:>10} {:>8}  per-seed\n", "controller", "mean", "sd");
  for (const auto& r : rows) {
    std::string per;
    for (int s : r.steps_to_converge) per += fmt::format(" {}", s);
    fmt::print("{:<14} {:>10.2f} {:>8.2f} {}\n", r.label, r.metrics.steps_to_converge.mean,
               r.metrics.steps_to_converge.sd, per);
  }
  if (!a.out.empty()) {
    write_text(std::filesystem::path(a.out) / "sweep_n.json", harness::to_json(rows).dump(2) + "\n");
  }
  return 0;
}

int cmd_bench(int dim, const std::vector<int>& rules, int steps, int reps, const std::string& out) {
  const auto table = harness::bench_complexity(dim, rules, steps, reps);
  fmt::print("L = {}\n{:>6} {:>14}\n", table.input_dim, "rules", "ns/step");
  for (const auto& r : table.rows) fmt::print("{:>6} {:>14.1f}\n", r.rules, r.ns_per_step);
  fmt::print("slope {:.2f} ns/rule, intercept {:.1f} ns, time(M={})/time(M={}) = {:.2f}\n",
             table.slope_ns_per_rule, table.intercept_ns, table.rows.back().rules,
             table.rows.front().rules, table.end_to_end_ratio());
  if (!out.empty()) write_text(std::filesystem::path(out) / "bench.json", harness::to_json(table).dump(2) + "\n");
  return 0;
}

int cmd_dump_rules(const std::string& session_path, const CommonRunArgs& a, int prime_steps,
                   std::uint64_t seed) {
  control::RuleListing listing;
  if (!session_path.empty()) {
    std::ifstream in(session_path);
    if (!in) throw ConfigError("cannot open session file '" + session_path + "'");
    nlohmann::json j;
    in >> j;
    listing = control::dump_rules(control::SofPidController::from_json(j));
  } else {
    auto cfg = make_config(a);
    cfg.controller = harness::ControllerKind::kSofPid;
    cfg.prime_steps = prime_steps;
    listing = *harness::run_episode(cfg, seed).rules;
  }
  fmt::print("{}", control::format_rule_table(listing));
  if (!a.out.empty()) {
    const std::filesystem::path dir(a.out);
    write_text(dir / "rules_control.json", control::rules_to_json(listing.control, true).dump(2) + "\n");
    write_text(dir / "rules_reference.json",
               control::rules_to_json(listing.reference, false).dump(2) + "\n");
  }
  return 0;
}

int cmd_scenarios(const std::string& out) {
  for (const auto& s : plant::scenario_catalog()) {
    if (out.empty()) {
      fmt::print("{:<5} start {:.2f} m  setpoint {:.2f} m  segments {}\n", s.name, s.initial_distance,
                 s.setpoint, s.segments.size());
    } else {
      write_text(std::filesystem::path(out) / (s.name + ".json"), plant::to_json(s).dump(2) + "\n");
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-organising fuzzy PID experiment runner"};
  app.require_subcommand(1);

  CommonRunArgs run_args;
  std::string controller{"sofpid"};
  int prime_steps = 10;
  auto* run = app.add_subcommand("run", "Monte-Carlo run of one controller on one scenario");
  add_common(run, run_args);
  run->add_option("--controller", controller, "pid | ts | sofpid");
  run->add_option("--prime-steps", prime_steps, "PID priming steps N (sofpid)")->check(CLI::Range(2, 100000));

  CommonRunArgs sweep_args;
  std::vector<int> n_values{5, 10, 15, 20};
  auto* sweep = app.add_subcommand("sweep-n", "steps-to-converge for several priming lengths plus PID");
  add_common(sweep, sweep_args);
  sweep->add_option("--n", n_values, "priming lengths")->delimiter(',');

  int dim = 3;
  std::vector<int> rule_counts{2, 4, 8, 16, 32};
  int bench_steps = 20000;
  int bench_reps = 7;
  std::string bench_out;
  auto* bench = app.add_subcommand("bench", "per-step engine time against pinned rule count");
  bench->add_option("--dim", dim, "input dimension L")->check(CLI::PositiveNumber);
  bench->add_option("--rules", rule_counts, "rule counts")->delimiter(',');
  bench->add_option("--steps", bench_steps, "learn steps per repetition");
  bench->add_option("--reps", bench_reps, "repetitions (median reported)");
  bench->add_option("--out", bench_out, "output directory");

  CommonRunArgs dump_args;
  std::string session_path;
  int dump_prime = 10;
  std::uint64_t dump_seed = 1;
  auto* dump = app.add_subcommand("dump-rules", "print the rule bases of a saved or fresh SOF-PID session");
  dump->add_option("--session", session_path, "session_<seed>.json written by 'run'");
  add_common(dump, dump_args);
  dump->add_option("--prime-steps", dump_prime, "PID priming steps N when running fresh");
  dump->add_option("--seed", dump_seed, "seed when running fresh");

  std::string scen_out;
  auto* scen = app.add_subcommand("scenarios", "list the scenario catalog or write it as JSON files");
  scen->add_option("--out", scen_out, "directory for <name>.json files");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_args, controller, prime_steps);
    if (*sweep) return cmd_sweep(sweep_args, n_values);
    if (*bench) return cmd_bench(dim, rule_counts, bench_steps, bench_reps, bench_out);
    if (*dump) return cmd_dump_rules(session_path, dump_args, dump_prime, dump_seed);
    if (*scen) return cmd_scenarios(scen_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
