#ifndef SOFPID_PLANT_HPP
#define SOFPID_PLANT_HPP

#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sofpid/ts_fuzzy.hpp"

namespace sofpid::plant {

using Rng = std::mt19937_64;

/// Stretch of path with its own surface response.
struct SurfaceSegment {
  double start_pos{0.0};  ///< m along the path
  double end_pos{0.0};
  double gain{1.0};       ///< velocity multiplier; < 1 for friction or bumps
  double bias{0.0};       ///< m/s drift from slopes, positive towards the target
};

struct Scenario {
  std::string name;
  double initial_distance{3.0};  ///< m from start to the object
  double setpoint{1.0};          ///< stop distance r, m
  std::vector<SurfaceSegment> segments;
  double dt{0.1};                ///< s per control step
  double u_max{1.2};             ///< m/s
  double sensor_noise_sd{0.005}; ///< m
  int max_steps{500};
  /// TS baseline rule base; the harness builds the standard one when absent.
  std::optional<baseline::TsRuleBase> ts_rulebase;

  double path_length() const { return initial_distance - setpoint; }
  /// Segment under position s; positions off either end use the end segments.
  const SurfaceSegment& segment_at(double s) const;
  /// Throws ConfigError unless the invariants hold (segments tile the path).
  void validate() const;
};

struct PlantState {
  double position{0.0};  ///< m travelled
  double y{0.0};         ///< measured distance to the object
  bool stopped{false};
  bool crossed{false};   ///< the stopping step crossed the setpoint
  bool warning{false};   ///< a command arrived after the plant had stopped
  int steps{0};
};

/// Initial state with one noisy measurement taken at the start line.
PlantState plant_reset(const Scenario& scenario, Rng& rng);

/// First-order kinematics:
///   v = clamp(u, 0, u_max) * gain(s) + bias(s);  s += v * dt
///   y = initial_distance - s + N(0, sensor_noise_sd)
/// The plant stops for good once y <= setpoint. Stepping a stopped plant
/// returns it unchanged apart from the warning flag.
PlantState plant_step(const PlantState& state, double u, const Scenario& scenario, Rng& rng);

/// sim, s1, s2, s3, s4.
std::vector<Scenario> scenario_catalog();

/// Catalog lookup by name; throws ConfigError for unknown names.
Scenario find_scenario(const std::string& name);

nlohmann::json to_json(const Scenario& scenario);
Scenario scenario_from_json(const nlohmann::json& j);
Scenario load_scenario_file(const std::string& path);

}  // namespace sofpid::plant

#endif  // SOFPID_PLANT_HPP
