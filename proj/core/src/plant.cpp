#include "sofpid/plant.hpp"

#include <algorithm>
#include <cmath>

#include "sofpid/errors.hpp"

namespace sofpid::plant {
namespace {

constexpr double kTileTol = 1e-9;

// Desk-scale surface defaults.
constexpr double kBumpLength = 0.15;
constexpr double kBumpGain = 0.4;
constexpr double kGrassGain = 0.7;
constexpr double kBrickGain = 1.0;
constexpr double kSlopeBias = 0.05;

double measure(double distance, double noise_sd, Rng& rng) {
  if (noise_sd <= 0.0) return distance;
  std::normal_distribution<double> noise(0.0, noise_sd);
  return distance + noise(rng);
}

// Flat path with low-gain bumps centred at the given fractions of its length.
std::vector<SurfaceSegment> bumpy_path(double length, const std::vector<double>& fractions) {
  std::vector<SurfaceSegment> segs;
  double cursor = 0.0;
  for (double f : fractions) {
    const double lo = f * length - 0.5 * kBumpLength;
    const double hi = lo + kBumpLength;
    segs.push_back({cursor, lo, 1.0, 0.0});
    segs.push_back({lo, hi, kBumpGain, 0.0});
    cursor = hi;
  }
  segs.push_back({cursor, length, 1.0, 0.0});
  return segs;
}

}  // namespace

const SurfaceSegment& Scenario::segment_at(double s) const {
  for (const auto& seg : segments) {
    if (s < seg.end_pos) return seg;
  }
  return segments.back();
}

void Scenario::validate() const {
  if (name.empty()) throw ConfigError("scenario: name must not be empty");
  if (!(setpoint >= 0.0 && initial_distance > setpoint)) {
    throw ConfigError("scenario '" + name + "': need initial_distance > setpoint >= 0");
  }
  if (!(dt > 0.0)) throw ConfigError("scenario '" + name + "': dt must be > 0");
  if (!(u_max > 0.0)) throw ConfigError("scenario '" + name + "': u_max must be > 0");
  if (!(sensor_noise_sd >= 0.0)) {
    throw ConfigError("scenario '" + name + "': sensor_noise_sd must be >= 0");
  }
  if (max_steps < 1) throw ConfigError("scenario '" + name + "': max_steps must be >= 1");
  if (segments.empty()) throw ConfigError("scenario '" + name + "': no surface segments");
  double cursor = 0.0;
  for (const auto& seg : segments) {
    if (!(seg.start_pos < seg.end_pos)) {
      throw ConfigError("scenario '" + name + "': segment start must precede its end");
    }
    if (!(seg.gain > 0.0)) throw ConfigError("scenario '" + name + "': segment gain must be > 0");
    if (std::fabs(seg.start_pos - cursor) > kTileTol) {
      throw ConfigError("scenario '" + name + "': segments leave a gap or overlap");
    }
    cursor = seg.end_pos;
  }
  if (std::fabs(cursor - path_length()) > kTileTol) {
    throw ConfigError("scenario '" + name + "': segments must end at initial_distance - setpoint");
  }
  if (ts_rulebase) ts_rulebase->validate();
}

PlantState plant_reset(const Scenario& scenario, Rng& rng) {
  PlantState s;
  s.y = measure(scenario.initial_distance, scenario.sensor_noise_sd, rng);
  return s;
}

PlantState plant_step(const PlantState& state, double u, const Scenario& scenario, Rng& rng) {
  if (state.stopped) {
    PlantState frozen = state;
    frozen.warning = true;
    return frozen;
  }
  if (!std::isfinite(u)) throw InvalidInput("plant: non-finite command");
  const SurfaceSegment& seg = scenario.segment_at(state.position);
  const double v = std::clamp(u, 0.0, scenario.u_max) * seg.gain + seg.bias;

  PlantState next = state;
  next.position = state.position + v * scenario.dt;
  next.y = measure(scenario.initial_distance - next.position, scenario.sensor_noise_sd, rng);
  next.steps = state.steps + 1;
  if (next.y <= scenario.setpoint) {
    next.stopped = true;
    next.crossed = true;
  }
  return next;
}

std::vector<Scenario> scenario_catalog() {
  std::vector<Scenario> out;

  Scenario sim;
  sim.name = "sim";
  sim.initial_distance = 3.0;
  sim.setpoint = 1.0;
  sim.segments = {{0.0, sim.path_length(), 1.0, 0.0}};
  out.push_back(sim);

  Scenario s1;
  s1.name = "s1";
  s1.initial_distance = 3.17;
  s1.setpoint = 0.5;
  s1.segments = bumpy_path(s1.path_length(), {0.5});
  out.push_back(s1);

  Scenario s2 = s1;
  s2.name = "s2";
  s2.segments = bumpy_path(s2.path_length(), {1.0 / 3.0, 2.0 / 3.0});
  out.push_back(s2);

  Scenario s3;
  s3.name = "s3";
  s3.initial_distance = 4.07;
  s3.setpoint = 0.5;
  const double half3 = 0.5 * s3.path_length();
  s3.segments = {{0.0, half3, kGrassGain, 0.0}, {half3, s3.path_length(), kBrickGain, 0.0}};
  out.push_back(s3);

  Scenario s4;
  s4.name = "s4";
  s4.initial_distance = 5.0;
  s4.setpoint = 0.5;
  const double half4 = 0.5 * s4.path_length();
  s4.segments = {{0.0, half4, 1.0, kSlopeBias}, {half4, s4.path_length(), 1.0, -kSlopeBias}};
  out.push_back(s4);

  return out;
}

Scenario find_scenario(const std::string& name) {
  for (auto& s : scenario_catalog()) {
    if (s.name == name) return s;
  }
  throw ConfigError("unknown scenario '" + name + "'");
}

}  // namespace sofpid::plant
