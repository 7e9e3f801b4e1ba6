#ifndef SOFPID_TS_FUZZY_HPP
#define SOFPID_TS_FUZZY_HPP

#include <array>
#include <optional>

#include <nlohmann/json.hpp>

#include "sofpid/pid.hpp"

namespace sofpid::baseline {

/// Triangle on [left, right] peaking at `peak`. A shouldered side saturates at
/// 1 instead of falling to 0 beyond the peak.
struct TriangularMf {
  double left{0.0};
  double peak{0.0};
  double right{0.0};
  bool shoulder_left{false};
  bool shoulder_right{false};

  double membership(double v) const;
};

enum class ErrorSet { kVeryLow, kLow, kMedium, kHigh };
enum class DeltaSet { kLow, kHigh };

struct TsRule {
  ErrorSet eps_set{ErrorSet::kVeryLow};
  std::optional<DeltaSet> delta_set;  ///< no Δ antecedent when empty
  double k_eps{0.0};
  double k_delta{0.0};
};

struct TsRuleBase {
  std::array<TriangularMf, 4> eps_sets;    ///< indexed by ErrorSet
  std::array<TriangularMf, 2> delta_sets;  ///< indexed by DeltaSet
  std::array<TsRule, 5> rules;

  /// The five fixed rules with equal-width error sets peaking at 0, 1/3, 2/3
  /// and 1 of eps_max (outer sets shouldered) and Δ Low/High crossing at 0,
  /// peaking at ∓delta_span (both shouldered).
  static TsRuleBase standard(double eps_max, double delta_span);

  /// Throws ConfigError when a breakpoint triple is not ordered.
  void validate() const;
};

/// Weighted-average Takagi–Sugeno output; weights are products of the
/// antecedent memberships. Throws std::domain_error if no rule fires.
double ts_fuzzy_output(const TsRuleBase& rulebase, double eps, double delta);

/// Fixed TS controller: same error bookkeeping as the PID, Σ unused.
class TsFuzzyController {
 public:
  explicit TsFuzzyController(TsRuleBase rulebase, control::ErrorOrientation orientation =
                                                      control::ErrorOrientation::kDistancePositive)
      : rulebase_(rulebase), tracker_(orientation) {}

  double step(double r, double y);
  const control::ErrorSignals& last_signals() const { return last_; }
  const TsRuleBase& rulebase() const { return rulebase_; }

 private:
  TsRuleBase rulebase_;
  control::ErrorTracker tracker_;
  control::ErrorSignals last_;
};

// {"eps_sets": [4 x {"left","peak","right","shoulder_left","shoulder_right"}],
//  "delta_sets": [2 x ...], "rules": [5 x {"eps_set","delta_set"|null,"k_eps","k_delta"}]}
nlohmann::json to_json(const TsRuleBase& rulebase);
TsRuleBase ts_rulebase_from_json(const nlohmann::json& j);

}  // namespace sofpid::baseline

#endif  // SOFPID_TS_FUZZY_HPP
