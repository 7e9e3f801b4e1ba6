#include "sofpid/almmo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sofpid/errors.hpp"

namespace sofpid::almmo {

void EngineConfig::validate() const {
  if (input_dim < 1) throw ConfigError("engine: input_dim must be >= 1");
  if (!(omega0 > 0.0)) throw ConfigError("engine: omega0 must be > 0");
  if (!(eta0 > 0.0 && eta0 < 1.0)) throw ConfigError("engine: eta0 must lie in (0, 1)");
  if (!(overlap_gamma > 0.0 && overlap_gamma < 1.0)) {
    throw ConfigError("engine: overlap_gamma must lie in (0, 1)");
  }
  if (!(density_floor > 0.0)) throw ConfigError("engine: density_floor must be > 0");
}

double local_density(const CloudState& cloud, const Vector& x, double density_floor) {
  const double s = static_cast<double>(cloud.support);
  const double x_sq = x.squaredNorm();
  double denom = (s + 1.0) * (s * cloud.chi + x_sq) - (x + s * cloud.prototype).squaredNorm();
  denom = std::max(denom, density_floor);
  const double num = s * s * (x - cloud.prototype).squaredNorm();
  return 1.0 / (1.0 + num / denom);
}

void merge_sample(CloudState& cloud, const Vector& x) {
  cloud.support = (cloud.support + 2) / 2;  // ceil((S + 1) / 2)
  cloud.prototype = 0.5 * (cloud.prototype + x);
  cloud.chi = 0.5 * (cloud.chi + x.squaredNorm());
}

void assign_sample(CloudState& cloud, const Vector& x) {
  const double s_old = static_cast<double>(cloud.support);
  cloud.support += 1;
  const double s_new = static_cast<double>(cloud.support);
  cloud.prototype = (s_old / s_new) * cloud.prototype + x / s_new;
  cloud.chi = (s_old / s_new) * cloud.chi + x.squaredNorm() / s_new;
}

AlmmoModel::AlmmoModel(const EngineConfig& config) : config_(config) {}

AlmmoModel AlmmoModel::from_first_sample(const EngineConfig& config, const Vector& x) {
  config.validate();
  AlmmoModel model(config);
  model.check_input(x);

  const int n = config.input_dim;
  model.t_ = 1;
  model.mu_ = x;
  model.big_x_ = x.squaredNorm();

  CloudState cloud;
  cloud.prototype = x;
  cloud.support = 1;
  cloud.chi = x.squaredNorm();
  cloud.lambda_acc = 1.0;
  cloud.utility = 1.0;
  cloud.init_step = 1;
  model.clouds_.push_back(std::move(cloud));

  RuleConsequent rule;
  rule.coeffs = Vector::Zero(n + 1);
  rule.theta = config.omega0 * Matrix::Identity(n + 1, n + 1);
  model.consequents_.push_back(std::move(rule));

  model.last_action_ = {StructureAction::Kind::kNewCloud, 0};
  return model;
}

AlmmoModel AlmmoModel::from_parts(const EngineConfig& config, std::int64_t t, Vector mu,
                                  double big_x, std::vector<CloudState> clouds,
                                  std::vector<RuleConsequent> consequents) {
  config.validate();
  const auto n = static_cast<Eigen::Index>(config.input_dim);
  if (t < 1) throw ConfigError("engine: sample counter must be >= 1");
  if (clouds.empty() || clouds.size() != consequents.size()) {
    throw ConfigError("engine: clouds and consequents must be non-empty and equally long");
  }
  if (mu.size() != n) throw ConfigError("engine: global mean has the wrong dimension");
  for (const auto& c : clouds) {
    if (c.prototype.size() != n) throw ConfigError("engine: prototype has the wrong dimension");
    if (c.support < 1) throw ConfigError("engine: cloud support must be >= 1");
  }
  for (const auto& r : consequents) {
    if (r.coeffs.size() != n + 1 || r.theta.rows() != n + 1 || r.theta.cols() != n + 1) {
      throw ConfigError("engine: consequent has the wrong dimension");
    }
  }
  AlmmoModel model(config);
  model.t_ = t;
  model.mu_ = std::move(mu);
  model.big_x_ = big_x;
  model.clouds_ = std::move(clouds);
  model.consequents_ = std::move(consequents);
  return model;
}

void AlmmoModel::check_input(const Vector& x) const {
  if (x.size() != config_.input_dim) {
    throw InvalidInput("engine: expected input of dimension " + std::to_string(config_.input_dim) +
                       ", got " + std::to_string(x.size()));
  }
  if (!x.allFinite()) throw InvalidInput("engine: input contains non-finite values");
}

void AlmmoModel::fill_extended(const Vector& x) const {
  const auto n = x.size();
  x_ext_.resize(n + 1);
  x_ext_.head(n) = x;
  x_ext_[n] = 1.0;
}

void AlmmoModel::fill_weights(const Vector& x) const {
  weights_.resize(static_cast<Eigen::Index>(clouds_.size()));
  double total = 0.0;
  for (std::size_t i = 0; i < clouds_.size(); ++i) {
    const double g = local_density(clouds_[i], x, config_.density_floor);
    weights_[static_cast<Eigen::Index>(i)] = g;
    total += g;
  }
  weights_ /= total;
}

Vector AlmmoModel::firing_strengths(const Vector& x) const {
  check_input(x);
  fill_weights(x);
  return weights_;
}

double AlmmoModel::predict(const Vector& x) const {
  check_input(x);
  fill_weights(x);
  fill_extended(x);
  double out = 0.0;
  for (std::size_t i = 0; i < consequents_.size(); ++i) {
    out += weights_[static_cast<Eigen::Index>(i)] * consequents_[i].coeffs.dot(x_ext_);
  }
  return out;
}

double AlmmoModel::global_density(const Vector& w) const {
  const double spread = std::max(big_x_ - mu_.squaredNorm(), config_.density_floor);
  return 1.0 / (1.0 + (w - mu_).squaredNorm() / spread);
}

void AlmmoModel::update_global(const Vector& x) {
  check_input(x);
  ++t_;
  const double t = static_cast<double>(t_);
  const double keep = (t - 1.0) / t;
  mu_ = keep * mu_ + x / t;
  big_x_ = keep * big_x_ + x.squaredNorm() / t;
}

std::size_t AlmmoModel::nearest_cloud(const Vector& x) const {
  std::size_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < clouds_.size(); ++i) {
    const double d = (x - clouds_[i].prototype).squaredNorm();
    if (d < best_dist) {
      best_dist = d;
      best = i;
    }
  }
  return best;
}

Vector AlmmoModel::mean_coeffs() const {
  Vector mean = Vector::Zero(config_.input_dim + 1);
  for (const auto& r : consequents_) mean += r.coeffs;
  return mean / static_cast<double>(consequents_.size());
}

StructureAction AlmmoModel::evolve_structure(const Vector& x) {
  check_input(x);
  using Kind = StructureAction::Kind;

  if (config_.structure_mode == StructureMode::kFrozen) {
    last_action_ = {Kind::kUnchanged, 0};
    return last_action_;
  }

  bool is_new_prototype = false;
  if (config_.structure_mode == StructureMode::kEvolving) {
    const double gx = global_density(x);
    double g_max = -std::numeric_limits<double>::infinity();
    double g_min = std::numeric_limits<double>::infinity();
    for (const auto& c : clouds_) {
      const double g = global_density(c.prototype);
      g_max = std::max(g_max, g);
      g_min = std::min(g_min, g);
    }
    is_new_prototype = gx > g_max || gx < g_min;
  }

  const std::size_t nearest = nearest_cloud(x);

  if (is_new_prototype) {
    double overlap = 0.0;
    for (const auto& c : clouds_) {
      overlap = std::max(overlap, local_density(c, x, config_.density_floor));
    }
    if (overlap > config_.overlap_gamma) {
      merge_sample(clouds_[nearest], x);
      last_action_ = {Kind::kMergedInto, nearest};
      return last_action_;
    }
    append_rule(x);
    last_action_ = {Kind::kNewCloud, clouds_.size() - 1};
    return last_action_;
  }

  assign_sample(clouds_[nearest], x);
  last_action_ = {Kind::kAssignedTo, nearest};
  return last_action_;
}

std::vector<std::size_t> AlmmoModel::monitor_quality(const Vector& x) {
  check_input(x);
  fill_weights(x);
  for (std::size_t i = 0; i < clouds_.size(); ++i) {
    CloudState& c = clouds_[i];
    c.lambda_acc += weights_[static_cast<Eigen::Index>(i)];
    c.utility = t_ > c.init_step ? c.lambda_acc / static_cast<double>(t_ - c.init_step) : 1.0;
  }

  std::vector<std::size_t> removed;
  if (config_.structure_mode != StructureMode::kEvolving) return removed;

  for (std::size_t i = 0; i < clouds_.size(); ++i) {
    if (clouds_[i].init_step != t_ && clouds_[i].utility < config_.eta0) removed.push_back(i);
  }
  if (removed.size() == clouds_.size()) {
    // Keep the most useful rule; an empty rule base has no output.
    auto best = std::max_element(removed.begin(), removed.end(), [&](std::size_t a, std::size_t b) {
      return clouds_[a].utility < clouds_[b].utility;
    });
    removed.erase(best);
  }
  for (auto it = removed.rbegin(); it != removed.rend(); ++it) {
    const auto offset = static_cast<std::ptrdiff_t>(*it);
    clouds_.erase(clouds_.begin() + offset);
    consequents_.erase(consequents_.begin() + offset);
  }
  return removed;
}

void AlmmoModel::update_consequents(const Vector& x, double target) {
  check_input(x);
  fill_weights(x);
  fill_extended(x);
  const auto n = x_ext_.size();
  for (std::size_t i = 0; i < consequents_.size(); ++i) {
    const double lambda = weights_[static_cast<Eigen::Index>(i)];
    RuleConsequent& rule = consequents_[i];
    gain_.noalias() = rule.theta * x_ext_;
    const double denom = 1.0 + lambda * x_ext_.dot(gain_);
    const double shrink = lambda / denom;
    // Rank-one downdate written out so both triangles get identical values.
    for (Eigen::Index c = 0; c < n; ++c) {
      for (Eigen::Index r = 0; r <= c; ++r) {
        const double v = rule.theta(r, c) - shrink * gain_[r] * gain_[c];
        rule.theta(r, c) = v;
        rule.theta(c, r) = v;
      }
    }
    // Theta_new * x_ext == gain / denom.
    const double innovation = target - rule.coeffs.dot(x_ext_);
    rule.coeffs += (shrink * innovation) * gain_;
  }
}

double AlmmoModel::learn_step(const Vector& x, double target) {
  check_input(x);
  if (!std::isfinite(target)) throw InvalidInput("engine: non-finite training target");
  const double prediction = predict(x);
  update_global(x);
  evolve_structure(x);
  monitor_quality(x);
  update_consequents(x, target);
  return prediction;
}

void AlmmoModel::append_rule(const Vector& prototype, const Vector& coeffs) {
  check_input(prototype);
  const int n = config_.input_dim;
  Vector a = coeffs.size() == 0 ? mean_coeffs() : coeffs;
  if (a.size() != n + 1) throw InvalidInput("engine: consequent has the wrong dimension");

  CloudState cloud;
  cloud.prototype = prototype;
  cloud.support = 1;
  cloud.chi = prototype.squaredNorm();
  cloud.lambda_acc = 1.0;
  cloud.utility = 1.0;
  cloud.init_step = t_;
  clouds_.push_back(std::move(cloud));

  RuleConsequent rule;
  rule.coeffs = std::move(a);
  rule.theta = config_.omega0 * Matrix::Identity(n + 1, n + 1);
  consequents_.push_back(std::move(rule));
}

void AlmmoModel::set_consequent(std::size_t index, const RuleConsequent& consequent) {
  const auto n = static_cast<Eigen::Index>(config_.input_dim) + 1;
  if (consequent.coeffs.size() != n || consequent.theta.rows() != n ||
      consequent.theta.cols() != n) {
    throw InvalidInput("engine: consequent has the wrong dimension");
  }
  consequents_.at(index) = consequent;
}

void AlmmoModel::set_cloud(std::size_t index, const CloudState& cloud) {
  check_input(cloud.prototype);
  if (cloud.support < 1) throw InvalidInput("engine: cloud support must be >= 1");
  clouds_.at(index) = cloud;
}

}  // namespace sofpid::almmo
