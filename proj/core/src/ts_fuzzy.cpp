#include "sofpid/ts_fuzzy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "sofpid/errors.hpp"

namespace sofpid::baseline {

double TriangularMf::membership(double v) const {
  if (v <= peak) {
    if (shoulder_left) return 1.0;
    if (v <= left) return v == peak ? 1.0 : 0.0;
    return (v - left) / (peak - left);
  }
  if (shoulder_right) return 1.0;
  if (v >= right) return 0.0;
  return (right - v) / (right - peak);
}

TsRuleBase TsRuleBase::standard(double eps_max, double delta_span) {
  if (!(eps_max > 0.0) || !(delta_span > 0.0)) {
    throw ConfigError("ts fuzzy: eps_max and delta_span must be > 0");
  }
  const double w = eps_max / 3.0;
  TsRuleBase rb;
  rb.eps_sets = {TriangularMf{-w, 0.0, w, true, false},
                 TriangularMf{0.0, w, 2.0 * w, false, false},
                 TriangularMf{w, 2.0 * w, 3.0 * w, false, false},
                 TriangularMf{2.0 * w, 3.0 * w, 4.0 * w, false, true}};
  const double s = delta_span;
  rb.delta_sets = {TriangularMf{-2.0 * s, -s, s, true, false},
                   TriangularMf{-s, s, 2.0 * s, false, true}};
  rb.rules = {TsRule{ErrorSet::kVeryLow, std::nullopt, 0.25, 0.001},
              TsRule{ErrorSet::kLow, DeltaSet::kHigh, 0.5, 0.002},
              TsRule{ErrorSet::kMedium, DeltaSet::kHigh, 0.5, 0.002},
              TsRule{ErrorSet::kMedium, DeltaSet::kLow, 1.0, 0.03},
              TsRule{ErrorSet::kHigh, std::nullopt, 2.0, 0.02}};
  return rb;
}

void TsRuleBase::validate() const {
  auto check = [](const TriangularMf& mf) {
    if (!(mf.left <= mf.peak && mf.peak <= mf.right)) {
      throw ConfigError("ts fuzzy: membership breakpoints must satisfy left <= peak <= right");
    }
  };
  for (const auto& mf : eps_sets) check(mf);
  for (const auto& mf : delta_sets) check(mf);
}

double ts_fuzzy_output(const TsRuleBase& rulebase, double eps, double delta) {
  double weight_sum = 0.0;
  double out = 0.0;
  for (const auto& rule : rulebase.rules) {
    double w = rulebase.eps_sets[static_cast<std::size_t>(rule.eps_set)].membership(eps);
    if (rule.delta_set) {
      w *= rulebase.delta_sets[static_cast<std::size_t>(*rule.delta_set)].membership(delta);
    }
    weight_sum += w;
    out += w * (rule.k_eps * eps + rule.k_delta * delta);
  }
  if (!(weight_sum > 0.0)) {
    throw std::domain_error("ts fuzzy: no rule fires at eps=" + std::to_string(eps) +
                            ", delta=" + std::to_string(delta));
  }
  return out / weight_sum;
}

double TsFuzzyController::step(double r, double y) {
  if (!std::isfinite(r) || !std::isfinite(y)) throw InvalidInput("ts fuzzy: non-finite reading");
  const control::ErrorSignals s = tracker_.peek(r, y);
  const double u = ts_fuzzy_output(rulebase_, s.eps, s.delta);
  last_ = tracker_.advance(r, y);
  return u;
}

namespace {

using nlohmann::json;

json mf_json(const TriangularMf& mf) {
  return json{{"left", mf.left},
              {"peak", mf.peak},
              {"right", mf.right},
              {"shoulder_left", mf.shoulder_left},
              {"shoulder_right", mf.shoulder_right}};
}

TriangularMf mf_from(const json& j) {
  return TriangularMf{j.at("left").get<double>(), j.at("peak").get<double>(),
                      j.at("right").get<double>(), j.value("shoulder_left", false),
                      j.value("shoulder_right", false)};
}

constexpr std::array<const char*, 4> kErrorNames{"very_low", "low", "medium", "high"};
constexpr std::array<const char*, 2> kDeltaNames{"low", "high"};

ErrorSet error_set_from(const std::string& name) {
  for (std::size_t i = 0; i < kErrorNames.size(); ++i) {
    if (name == kErrorNames[i]) return static_cast<ErrorSet>(i);
  }
  throw ConfigError("ts fuzzy: unknown error set '" + name + "'");
}

DeltaSet delta_set_from(const std::string& name) {
  for (std::size_t i = 0; i < kDeltaNames.size(); ++i) {
    if (name == kDeltaNames[i]) return static_cast<DeltaSet>(i);
  }
  throw ConfigError("ts fuzzy: unknown delta set '" + name + "'");
}

}  // namespace

json to_json(const TsRuleBase& rb) {
  json eps = json::array();
  for (const auto& mf : rb.eps_sets) eps.push_back(mf_json(mf));
  json del = json::array();
  for (const auto& mf : rb.delta_sets) del.push_back(mf_json(mf));
  json rules = json::array();
  for (const auto& r : rb.rules) {
    rules.push_back(json{{"eps_set", kErrorNames[static_cast<std::size_t>(r.eps_set)]},
                         {"delta_set", r.delta_set
                                           ? json(kDeltaNames[static_cast<std::size_t>(*r.delta_set)])
                                           : json(nullptr)},
                         {"k_eps", r.k_eps},
                         {"k_delta", r.k_delta}});
  }
  return json{{"eps_sets", eps}, {"delta_sets", del}, {"rules", rules}};
}

TsRuleBase ts_rulebase_from_json(const json& j) {
  try {
    TsRuleBase rb;
    const auto& eps = j.at("eps_sets");
    const auto& del = j.at("delta_sets");
    const auto& rules = j.at("rules");
    if (eps.size() != 4 || del.size() != 2 || rules.size() != 5) {
      throw ConfigError("ts fuzzy: expected 4 error sets, 2 delta sets and 5 rules");
    }
    for (std::size_t i = 0; i < 4; ++i) rb.eps_sets[i] = mf_from(eps[i]);
    for (std::size_t i = 0; i < 2; ++i) rb.delta_sets[i] = mf_from(del[i]);
    for (std::size_t i = 0; i < 5; ++i) {
      const auto& rj = rules[i];
      TsRule r;
      r.eps_set = error_set_from(rj.at("eps_set").get<std::string>());
      if (rj.contains("delta_set") && !rj.at("delta_set").is_null()) {
        r.delta_set = delta_set_from(rj.at("delta_set").get<std::string>());
      }
      r.k_eps = rj.at("k_eps").get<double>();
      r.k_delta = rj.at("k_delta").get<double>();
      rb.rules[i] = r;
    }
    rb.validate();
    return rb;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("ts fuzzy json: ") + e.what());
  }
}

}  // namespace sofpid::baseline
