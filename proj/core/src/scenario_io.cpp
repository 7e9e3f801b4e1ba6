#include <fstream>
#include <sstream>

#include "sofpid/errors.hpp"
#include "sofpid/plant.hpp"

namespace sofpid::plant {

using nlohmann::json;

json to_json(const Scenario& s) {
  json segs = json::array();
  for (const auto& seg : s.segments) {
    segs.push_back(json{{"start_pos", seg.start_pos},
                        {"end_pos", seg.end_pos},
                        {"gain", seg.gain},
                        {"bias", seg.bias}});
  }
  json j{{"name", s.name},
         {"initial_distance", s.initial_distance},
         {"setpoint", s.setpoint},
         {"segments", std::move(segs)},
         {"dt", s.dt},
         {"u_max", s.u_max},
         {"sensor_noise_sd", s.sensor_noise_sd},
         {"max_steps", s.max_steps}};
  if (s.ts_rulebase) j["ts_fuzzy"] = baseline::to_json(*s.ts_rulebase);
  return j;
}

Scenario scenario_from_json(const json& j) {
  Scenario s;
  try {
    s.name = j.at("name").get<std::string>();
    s.initial_distance = j.at("initial_distance").get<double>();
    s.setpoint = j.at("setpoint").get<double>();
    for (const auto& sj : j.at("segments")) {
      s.segments.push_back({sj.at("start_pos").get<double>(), sj.at("end_pos").get<double>(),
                            sj.value("gain", 1.0), sj.value("bias", 0.0)});
    }
    s.dt = j.value("dt", s.dt);
    s.u_max = j.value("u_max", s.u_max);
    s.sensor_noise_sd = j.value("sensor_noise_sd", s.sensor_noise_sd);
    s.max_steps = j.value("max_steps", s.max_steps);
    if (j.contains("ts_fuzzy")) s.ts_rulebase = baseline::ts_rulebase_from_json(j.at("ts_fuzzy"));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario json: ") + e.what());
  }
  s.validate();
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("scenario file '" + path + "': " + e.what());
  }
  return scenario_from_json(j);
}

}  // namespace sofpid::plant
