#ifndef SOFPID_METRICS_HPP
#define SOFPID_METRICS_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace sofpid::harness {

/// One control step of an episode. Baselines leave the SOF-PID columns empty.
struct TraceRecord {
  int step{0};
  double r{0.0};
  double y{0.0};
  double eps{0.0};
  double sigma{0.0};
  double delta{0.0};
  double u{0.0};
  std::optional<double> u_hat;
  std::optional<int> rules_control;
  std::optional<int> rules_reference;
};

struct EpisodeMetrics {
  /// First step from which |eps| < tol holds to the end of the trace;
  /// max_steps when that never happens.
  int steps_to_converge{0};
  bool converged{false};
  int overshoot_events{0};  ///< sign changes of eps between consecutive steps
  double final_abs_error{0.0};
  double mean_abs_error{0.0};
};

/// Pure function of the trace; convergence uses the recorded eps column.
EpisodeMetrics compute_metrics(std::span<const TraceRecord> trace, double tol, int max_steps);

struct Summary {
  double mean{0.0};
  double sd{0.0};  ///< sample standard deviation; 0 for fewer than two values
};

/// Sorts before reducing, so the result does not depend on input order.
Summary summarize(std::vector<double> values);

struct AggregateMetrics {
  int episodes{0};
  int converged{0};
  Summary steps_to_converge;
  Summary overshoot_events;
  Summary final_abs_error;
  Summary mean_abs_error;
};

AggregateMetrics aggregate(std::span<const EpisodeMetrics> per_seed);

/// Header: step,r,y,eps,sigma,delta,u,u_hat,rules_control,rules_reference
std::string trace_to_csv(std::span<const TraceRecord> trace);

nlohmann::json to_json(const EpisodeMetrics& m);
nlohmann::json to_json(const AggregateMetrics& m);

}  // namespace sofpid::harness

#endif  // SOFPID_METRICS_HPP
