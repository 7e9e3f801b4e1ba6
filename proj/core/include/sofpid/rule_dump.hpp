#ifndef SOFPID_RULE_DUMP_HPP
#define SOFPID_RULE_DUMP_HPP

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sofpid/almmo.hpp"
#include "sofpid/sofpid_controller.hpp"

namespace sofpid::control {

/// One rule as listed for a human reader; numbers rounded to 4 decimals.
struct RuleRow {
  std::vector<double> prototype;
  std::vector<double> coeffs;
  std::string text;
};

struct RuleListing {
  bool running{false};
  std::vector<RuleRow> control;    ///< (eps, sigma, delta -> P, I, D, R)
  std::vector<RuleRow> reference;  ///< (eps, y -> Q, Y, W)
};

/// IF (x ~ [2.6500, 4.3841, 0.8815]) THEN (u = 0.2171ε - 0.0017Σ + 0.0076Δ + 0.0761)
std::string render_control_rule(const almmo::Vector& prototype, const almmo::Vector& coeffs);

/// IF (z ~ [2.6500, 3.1500]) THEN (û = 0.1176ε + 0.1096y - 0.0160)
std::string render_reference_rule(const almmo::Vector& prototype, const almmo::Vector& coeffs);

/// Empty listing with running == false while the controller is still priming.
RuleListing dump_rules(const SofPidController& controller);

/// {"model": "control"|"reference", "inputs": [...], "coefficients": [...],
///  "rules": [{"index", "prototype", "coefficients", "text"}]}
nlohmann::json rules_to_json(const std::vector<RuleRow>& rows, bool control_model);

/// Numbered plain-text table of both rule bases.
std::string format_rule_table(const RuleListing& listing);

}  // namespace sofpid::control

#endif  // SOFPID_RULE_DUMP_HPP
