#include "sofpid/sofpid_controller.hpp"

#include <cmath>
#include <string>

#include "sofpid/almmo_json.hpp"
#include "sofpid/errors.hpp"

namespace sofpid::control {

using almmo::AlmmoModel;
using almmo::Vector;

void SofPidConfig::validate() const {
  if (prime_steps < 2) throw ConfigError("sofpid: prime_steps must be >= 2");
  if (!std::isfinite(prime_gains.p) || !std::isfinite(prime_gains.i) ||
      !std::isfinite(prime_gains.d)) {
    throw ConfigError("sofpid: prime gains must be finite");
  }
  if (control_engine.input_dim != 3) throw ConfigError("sofpid: control engine needs input_dim 3");
  if (reference_engine.input_dim != 2) {
    throw ConfigError("sofpid: reference engine needs input_dim 2");
  }
  control_engine.validate();
  reference_engine.validate();
}

SofPidController::SofPidController(SofPidConfig config)
    : config_(std::move(config)), tracker_(config_.orientation) {
  config_.validate();
  history_.reserve(static_cast<std::size_t>(config_.prime_steps));
}

std::pair<AlmmoModel, AlmmoModel> SofPidController::build_models(
    const SofPidConfig& config, const std::vector<PrimingSample>& history) {
  if (history.size() < 2) throw InvalidInput("sofpid: need at least two primed samples");

  AlmmoModel control = AlmmoModel::from_first_sample(config.control_engine, history.front().x);
  for (std::size_t k = 1; k < history.size(); ++k) {
    control.learn_step(history[k].x, history[k].u);
  }

  std::optional<AlmmoModel> reference;
  for (std::size_t k = 1; k < history.size(); ++k) {
    if (!history[k].z) continue;
    if (!reference) {
      reference = AlmmoModel::from_first_sample(config.reference_engine, *history[k].z);
    } else {
      reference->learn_step(*history[k].z, history[k - 1].u);
    }
  }
  if (!reference) throw InvalidInput("sofpid: primed history carries no reference inputs");
  return {std::move(control), std::move(*reference)};
}

SofPidStep SofPidController::step(double r, double y) {
  if (!std::isfinite(r) || !std::isfinite(y)) throw InvalidInput("sofpid: non-finite reading");

  const ErrorSignals s = tracker_.peek(r, y);
  const std::int64_t t = tracker_.steps() + 1;
  Vector x(3);
  x << s.eps, s.sigma, s.delta;

  SofPidStep out;
  out.signals = s;

  if (phase_ == Phase::kPriming) {
    out.phase = Phase::kPriming;
    out.u = pid_output(config_.prime_gains, s.eps, s.sigma, s.delta);

    PrimingSample sample{x, std::nullopt, out.u};
    if (t >= 2) {
      Vector z(2);
      z << tracker_.eps_prev(), y_prev_;
      sample.z = std::move(z);
    }
    history_.push_back(std::move(sample));

    if (t == config_.prime_steps) {
      auto models = build_models(config_, history_);
      control_ = std::move(models.first);
      reference_ = std::move(models.second);
      phase_ = Phase::kRunning;
    }
  } else {
    out.phase = Phase::kRunning;
    Vector z(2);
    z << tracker_.eps_prev(), y_prev_;
    const double u_hat = reference_->learn_step(z, u_prev_);
    out.u_hat = u_hat;
    out.u = control_->learn_step(x, u_hat);
  }

  tracker_.advance(r, y);
  y_prev_ = y;
  u_prev_ = out.u;
  return out;
}

namespace {

nlohmann::json vec_json(const Vector& v) {
  return nlohmann::json(std::vector<double>(v.data(), v.data() + v.size()));
}

Vector vec_from(const nlohmann::json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace

nlohmann::json SofPidController::to_json() const {
  using nlohmann::json;
  json hist = json::array();
  for (const auto& h : history_) {
    hist.push_back(json{{"x", vec_json(h.x)},
                        {"z", h.z ? vec_json(*h.z) : json(nullptr)},
                        {"u", h.u}});
  }
  json j{{"schema", kSessionSchema},
         {"config",
          {{"prime_steps", config_.prime_steps},
           {"prime_gains",
            {{"P", config_.prime_gains.p}, {"I", config_.prime_gains.i}, {"D", config_.prime_gains.d}}},
           {"control_engine", almmo::to_json(config_.control_engine)},
           {"reference_engine", almmo::to_json(config_.reference_engine)},
           {"orientation", config_.orientation == ErrorOrientation::kPaperEq1 ? "paper_eq1"
                                                                              : "distance_positive"}}},
         {"phase", phase_ == Phase::kPriming ? "priming" : "running"},
         {"t", tracker_.steps()},
         {"sigma", tracker_.sigma()},
         {"eps_prev", tracker_.eps_prev()},
         {"y_prev", y_prev_},
         {"u_prev", u_prev_},
         {"history", std::move(hist)},
         {"control_model", control_ ? almmo::to_json(*control_) : json(nullptr)},
         {"reference_model", reference_ ? almmo::to_json(*reference_) : json(nullptr)}};
  return j;
}

SofPidController SofPidController::from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema").get<std::string>() != kSessionSchema) {
      throw ConfigError("session json: unexpected schema tag");
    }
    const auto& cj = j.at("config");
    SofPidConfig config;
    config.prime_steps = cj.at("prime_steps").get<int>();
    const auto& gj = cj.at("prime_gains");
    config.prime_gains = {gj.at("P").get<double>(), gj.at("I").get<double>(),
                          gj.at("D").get<double>()};
    config.control_engine = almmo::engine_config_from_json(cj.at("control_engine"));
    config.reference_engine = almmo::engine_config_from_json(cj.at("reference_engine"));
    const auto orientation = cj.at("orientation").get<std::string>();
    if (orientation == "paper_eq1") {
      config.orientation = ErrorOrientation::kPaperEq1;
    } else if (orientation == "distance_positive") {
      config.orientation = ErrorOrientation::kDistancePositive;
    } else {
      throw ConfigError("session json: unknown orientation '" + orientation + "'");
    }

    SofPidController c(config);
    const auto phase = j.at("phase").get<std::string>();
    if (phase != "priming" && phase != "running") {
      throw ConfigError("session json: unknown phase '" + phase + "'");
    }
    c.phase_ = phase == "running" ? Phase::kRunning : Phase::kPriming;
    c.tracker_.restore(j.at("t").get<std::int64_t>(), j.at("sigma").get<double>(),
                       j.at("eps_prev").get<double>());
    c.y_prev_ = j.at("y_prev").get<double>();
    c.u_prev_ = j.at("u_prev").get<double>();
    for (const auto& hj : j.at("history")) {
      PrimingSample s;
      s.x = vec_from(hj.at("x"));
      if (!hj.at("z").is_null()) s.z = vec_from(hj.at("z"));
      s.u = hj.at("u").get<double>();
      c.history_.push_back(std::move(s));
    }
    if (c.phase_ == Phase::kRunning) {
      c.control_ = almmo::model_from_json(j.at("control_model"));
      c.reference_ = almmo::model_from_json(j.at("reference_model"));
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("session json: ") + e.what());
  }
}

}  // namespace sofpid::control
