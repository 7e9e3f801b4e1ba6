#include "sofpid/almmo_json.hpp"

#include <string>
#include <vector>

#include "sofpid/errors.hpp"

namespace sofpid::almmo {
namespace {

using nlohmann::json;

json vector_to_json(const Vector& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Vector vector_from_json(const json& j, Eigen::Index expected, const char* what) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != expected) {
    throw ConfigError(std::string("model json: '") + what + "' has the wrong length");
  }
  Vector v(expected);
  for (Eigen::Index i = 0; i < expected; ++i) v[i] = j[static_cast<std::size_t>(i)].get<double>();
  return v;
}

const char* mode_name(StructureMode mode) {
  switch (mode) {
    case StructureMode::kEvolving: return "evolving";
    case StructureMode::kAssignOnly: return "assign_only";
    case StructureMode::kFrozen: return "frozen";
  }
  return "evolving";
}

StructureMode mode_from_name(const std::string& name) {
  if (name == "evolving") return StructureMode::kEvolving;
  if (name == "assign_only") return StructureMode::kAssignOnly;
  if (name == "frozen") return StructureMode::kFrozen;
  throw ConfigError("model json: unknown structure_mode '" + name + "'");
}

}  // namespace

json to_json(const EngineConfig& config) {
  return json{{"input_dim", config.input_dim},
              {"omega0", config.omega0},
              {"eta0", config.eta0},
              {"overlap_gamma", config.overlap_gamma},
              {"density_floor", config.density_floor},
              {"structure_mode", mode_name(config.structure_mode)}};
}

EngineConfig engine_config_from_json(const json& j) {
  EngineConfig c;
  try {
    c.input_dim = j.at("input_dim").get<int>();
    c.omega0 = j.value("omega0", c.omega0);
    c.eta0 = j.value("eta0", c.eta0);
    c.overlap_gamma = j.value("overlap_gamma", c.overlap_gamma);
    c.density_floor = j.value("density_floor", c.density_floor);
    c.structure_mode = mode_from_name(j.value("structure_mode", std::string("evolving")));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("engine config json: ") + e.what());
  }
  c.validate();
  return c;
}

json to_json(const AlmmoModel& model) {
  json rules = json::array();
  const auto& clouds = model.clouds();
  const auto& consequents = model.consequents();
  for (std::size_t i = 0; i < clouds.size(); ++i) {
    const auto& c = clouds[i];
    const auto& r = consequents[i];
    std::vector<double> theta;
    theta.reserve(static_cast<std::size_t>(r.theta.size()));
    for (Eigen::Index row = 0; row < r.theta.rows(); ++row) {
      for (Eigen::Index col = 0; col < r.theta.cols(); ++col) theta.push_back(r.theta(row, col));
    }
    rules.push_back(json{{"prototype", vector_to_json(c.prototype)},
                         {"support", c.support},
                         {"chi", c.chi},
                         {"lambda_acc", c.lambda_acc},
                         {"utility", c.utility},
                         {"init_step", c.init_step},
                         {"consequent", vector_to_json(r.coeffs)},
                         {"theta", theta}});
  }
  return json{{"schema", kModelSchema},
              {"config", to_json(model.config())},
              {"t", model.samples_seen()},
              {"rule_count", model.rule_count()},
              {"global",
               {{"mean", vector_to_json(model.global_mean())},
                {"scalar_product", model.global_scalar_product()}}},
              {"rules", std::move(rules)}};
}

AlmmoModel model_from_json(const json& j) {
  try {
    if (j.at("schema").get<std::string>() != kModelSchema) {
      throw ConfigError("model json: unexpected schema tag");
    }
    const EngineConfig config = engine_config_from_json(j.at("config"));
    const Eigen::Index n = config.input_dim;

    std::vector<CloudState> clouds;
    std::vector<RuleConsequent> consequents;
    for (const auto& rj : j.at("rules")) {
      CloudState c;
      c.prototype = vector_from_json(rj.at("prototype"), n, "prototype");
      c.support = rj.at("support").get<std::int64_t>();
      c.chi = rj.at("chi").get<double>();
      c.lambda_acc = rj.at("lambda_acc").get<double>();
      c.utility = rj.at("utility").get<double>();
      c.init_step = rj.at("init_step").get<std::int64_t>();

      RuleConsequent r;
      r.coeffs = vector_from_json(rj.at("consequent"), n + 1, "consequent");
      const Vector flat = vector_from_json(rj.at("theta"), (n + 1) * (n + 1), "theta");
      r.theta.resize(n + 1, n + 1);
      for (Eigen::Index row = 0; row < n + 1; ++row) {
        for (Eigen::Index col = 0; col < n + 1; ++col) r.theta(row, col) = flat[row * (n + 1) + col];
      }
      clouds.push_back(std::move(c));
      consequents.push_back(std::move(r));
    }
    if (j.contains("rule_count") && j.at("rule_count").get<std::size_t>() != clouds.size()) {
      throw ConfigError("model json: rule_count does not match the rules array");
    }
    const auto& g = j.at("global");
    return AlmmoModel::from_parts(config, j.at("t").get<std::int64_t>(),
                                  vector_from_json(g.at("mean"), n, "mean"),
                                  g.at("scalar_product").get<double>(), std::move(clouds),
                                  std::move(consequents));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("model json: ") + e.what());
  }
}

}  // namespace sofpid::almmo
