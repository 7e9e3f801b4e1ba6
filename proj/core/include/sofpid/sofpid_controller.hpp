#ifndef SOFPID_SOFPID_CONTROLLER_HPP
#define SOFPID_SOFPID_CONTROLLER_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "sofpid/almmo.hpp"
#include "sofpid/pid.hpp"

namespace sofpid::control {

struct SofPidConfig {
  int prime_steps{10};
  PidGains prime_gains{};
  almmo::EngineConfig control_engine{.input_dim = 3};
  almmo::EngineConfig reference_engine{.input_dim = 2};
  ErrorOrientation orientation{ErrorOrientation::kDistancePositive};

  void validate() const;
};

enum class Phase { kPriming, kRunning };

/// One step recorded while the PID prime drives the plant.
struct PrimingSample {
  almmo::Vector x;                ///< [eps, sigma, delta]
  std::optional<almmo::Vector> z; ///< [eps_prev, y_prev]; absent on the first step
  double u{0.0};
};

struct SofPidStep {
  double u{0.0};
  std::optional<double> u_hat;  ///< reference-model output, Running phase only
  ErrorSignals signals;
  Phase phase{Phase::kPriming};
};

/// Self-organising fuzzy PID: a control model (inputs eps, sigma, delta) and a
/// reference model (inputs eps_prev, y_prev), both ALMMo engines.
///
/// The first N steps are driven by a fixed PID while the (x, z, u) tuples are
/// collected. At step N both models are built by replaying that history one
/// sample at a time. From step N+1 on, every step runs
///   u_hat = reference.learn_step(z_t, u_{t-1})
///   u     = control.learn_step(x_t, u_hat)
/// and u is the command. No saturation is applied here.
class SofPidController {
 public:
  explicit SofPidController(SofPidConfig config = {});

  /// Throws InvalidInput on a non-finite reading; the state is then unchanged.
  SofPidStep step(double r, double y);

  const SofPidConfig& config() const { return config_; }
  Phase phase() const { return phase_; }
  std::int64_t steps() const { return tracker_.steps(); }
  double sigma() const { return tracker_.sigma(); }
  double eps_prev() const { return tracker_.eps_prev(); }
  double y_prev() const { return y_prev_; }
  double u_prev() const { return u_prev_; }
  const std::vector<PrimingSample>& history() const { return history_; }

  /// Null while priming.
  const almmo::AlmmoModel* control_model() const { return control_ ? &*control_ : nullptr; }
  const almmo::AlmmoModel* reference_model() const {
    return reference_ ? &*reference_ : nullptr;
  }
  std::size_t control_rule_count() const { return control_ ? control_->rule_count() : 0; }
  std::size_t reference_rule_count() const { return reference_ ? reference_->rule_count() : 0; }

  /// Builds both models by sequential replay of a primed history: the control
  /// model on (x_k, u_k), the reference model on (z_k, u_{k-1}).
  static std::pair<almmo::AlmmoModel, almmo::AlmmoModel> build_models(
      const SofPidConfig& config, const std::vector<PrimingSample>& history);

  nlohmann::json to_json() const;
  static SofPidController from_json(const nlohmann::json& j);

 private:
  SofPidConfig config_;
  Phase phase_{Phase::kPriming};
  ErrorTracker tracker_;
  double y_prev_{0.0};
  double u_prev_{0.0};
  std::vector<PrimingSample> history_;
  std::optional<almmo::AlmmoModel> control_;
  std::optional<almmo::AlmmoModel> reference_;
};

inline constexpr const char* kSessionSchema = "sofpid.session/1";

}  // namespace sofpid::control

#endif  // SOFPID_SOFPID_CONTROLLER_HPP
