#include "sofpid/metrics.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace sofpid::harness {

EpisodeMetrics compute_metrics(std::span<const TraceRecord> trace, double tol, int max_steps) {
  EpisodeMetrics m;
  m.steps_to_converge = max_steps;
  if (trace.empty()) return m;

  // Walk backwards to the first record of the trailing in-tolerance run.
  std::size_t first_ok = trace.size();
  while (first_ok > 0 && std::fabs(trace[first_ok - 1].eps) < tol) --first_ok;
  if (first_ok < trace.size()) {
    m.converged = true;
    m.steps_to_converge = trace[first_ok].step;
  }

  double abs_sum = 0.0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    abs_sum += std::fabs(trace[i].eps);
    if (i > 0) {
      const double a = trace[i - 1].eps;
      const double b = trace[i].eps;
      if ((a > 0.0 && b <= 0.0) || (a < 0.0 && b >= 0.0)) ++m.overshoot_events;
    }
  }
  m.final_abs_error = std::fabs(trace.back().eps);
  m.mean_abs_error = abs_sum / static_cast<double>(trace.size());
  return m;
}

Summary summarize(std::vector<double> values) {
  Summary s;
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(sq / static_cast<double>(values.size() - 1));
  }
  return s;
}

AggregateMetrics aggregate(std::span<const EpisodeMetrics> per_seed) {
  AggregateMetrics a;
  a.episodes = static_cast<int>(per_seed.size());
  std::vector<double> steps, overshoot, final_err, mean_err;
  for (const auto& m : per_seed) {
    if (m.converged) ++a.converged;
    steps.push_back(m.steps_to_converge);
    overshoot.push_back(m.overshoot_events);
    final_err.push_back(m.final_abs_error);
    mean_err.push_back(m.mean_abs_error);
  }
  a.steps_to_converge = summarize(std::move(steps));
  a.overshoot_events = summarize(std::move(overshoot));
  a.final_abs_error = summarize(std::move(final_err));
  a.mean_abs_error = summarize(std::move(mean_err));
  return a;
}

std::string trace_to_csv(std::span<const TraceRecord> trace) {
  std::string out = "step,r,y,eps,sigma,delta,u,u_hat,rules_control,rules_reference\n";
  for (const auto& t : trace) {
    out += fmt::format("{},{},{},{},{},{},{},", t.step, t.r, t.y, t.eps, t.sigma, t.delta, t.u);
    out += t.u_hat ? fmt::format("{}", *t.u_hat) : std::string();
    out += ',';
    out += t.rules_control ? fmt::format("{}", *t.rules_control) : std::string();
    out += ',';
    out += t.rules_reference ? fmt::format("{}", *t.rules_reference) : std::string();
    out += '\n';
  }
  return out;
}

nlohmann::json to_json(const EpisodeMetrics& m) {
  return {{"steps_to_converge", m.steps_to_converge},
          {"converged", m.converged},
          {"overshoot_events", m.overshoot_events},
          {"final_abs_error", m.final_abs_error},
          {"mean_abs_error", m.mean_abs_error}};
}

nlohmann::json to_json(const AggregateMetrics& m) {
  auto summary = [](const Summary& s) { return nlohmann::json{{"mean", s.mean}, {"sd", s.sd}}; };
  return {{"episodes", m.episodes},
          {"converged", m.converged},
          {"steps_to_converge", summary(m.steps_to_converge)},
          {"overshoot_events", summary(m.overshoot_events)},
          {"final_abs_error", summary(m.final_abs_error)},
          {"mean_abs_error", summary(m.mean_abs_error)}};
}

}  // namespace sofpid::harness
