#ifndef SOFPID_ALMMO_JSON_HPP
#define SOFPID_ALMMO_JSON_HPP

#include <nlohmann/json.hpp>

#include "sofpid/almmo.hpp"

namespace sofpid::almmo {

/// Schema tag written into every serialised model.
inline constexpr const char* kModelSchema = "sofpid.almmo-model/1";

// Document layout:
//   {
//     "schema": "sofpid.almmo-model/1",
//     "config": {"input_dim", "omega0", "eta0", "overlap_gamma", "density_floor",
//                "structure_mode": "evolving" | "assign_only" | "frozen"},
//     "t": <samples seen>, "rule_count": M,
//     "global": {"mean": [L], "scalar_product": X},
//     "rules": [{"prototype": [L], "support", "chi", "lambda_acc", "utility",
//                "init_step", "consequent": [L+1], "theta": [(L+1)^2, row-major]}]
//   }
// Doubles are written with round-trip precision, so a reload is bit-exact.

nlohmann::json to_json(const EngineConfig& config);
EngineConfig engine_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const AlmmoModel& model);

/// Throws ConfigError on a schema or shape mismatch.
AlmmoModel model_from_json(const nlohmann::json& j);

}  // namespace sofpid::almmo

#endif  // SOFPID_ALMMO_JSON_HPP
