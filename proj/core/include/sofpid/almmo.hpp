#ifndef SOFPID_ALMMO_HPP
#define SOFPID_ALMMO_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace sofpid::almmo {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// How much of the self-organising machinery runs inside learn_step().
///
/// kEvolving is the normal mode. The other two exist so that tests and
/// benchmarks can pin the rule base: kAssignOnly always assigns the sample to
/// the nearest cloud and never prunes; kFrozen leaves every cloud untouched.
enum class StructureMode { kEvolving, kAssignOnly, kFrozen };

struct EngineConfig {
  int input_dim{3};
  double omega0{10.0};         ///< initial covariance scale
  double eta0{0.1};            ///< utility threshold for pruning
  double overlap_gamma{0.8};   ///< local density above which a new cloud overlaps
  double density_floor{1e-12}; ///< lower clamp for both density denominators
  StructureMode structure_mode{StructureMode::kEvolving};

  /// Throws ConfigError when a field is out of range.
  void validate() const;
};

/// One data cloud: prototype plus the recursive statistics of its members.
struct CloudState {
  Vector prototype;
  std::int64_t support{1};
  double chi{0.0};         ///< average squared norm of the members
  double lambda_acc{1.0};  ///< accumulated firing strength
  double utility{1.0};
  std::int64_t init_step{1};
};

/// Affine consequent a^T [x; 1] and its inverse-information matrix.
struct RuleConsequent {
  Vector coeffs;
  Matrix theta;
};

struct StructureAction {
  enum class Kind { kNewCloud, kMergedInto, kAssignedTo, kUnchanged };
  Kind kind{Kind::kUnchanged};
  std::size_t index{0};

  friend bool operator==(const StructureAction&, const StructureAction&) = default;
};

/// Local (per-cloud) density of x. The denominator is the scatter of the
/// cloud's members together with x, so the value equals the Cauchy density of
/// x against that augmented member set.
double local_density(const CloudState& cloud, const Vector& x, double density_floor);

/// Folds x into an overlapping cloud: support ceil((S + 1) / 2), prototype and
/// chi averaged with x.
void merge_sample(CloudState& cloud, const Vector& x);

/// Adds x as an ordinary member: incremental means of prototype and chi.
void assign_sample(CloudState& cloud, const Vector& x);

/// First-order autonomous-learning multi-model system.
///
/// Rules are anchored at data-cloud prototypes; each rule's consequent is a
/// linear model fitted by fuzzily weighted RLS. The model learns one sample at
/// a time through learn_step(), which predicts first and updates afterwards.
///
/// A model is single-writer state. Distinct instances share nothing.
class AlmmoModel {
 public:
  /// Builds the one-rule model seeded by the first sample.
  static AlmmoModel from_first_sample(const EngineConfig& config, const Vector& x);

  const EngineConfig& config() const { return config_; }
  int input_dim() const { return config_.input_dim; }
  std::int64_t samples_seen() const { return t_; }
  std::size_t rule_count() const { return clouds_.size(); }
  const Vector& global_mean() const { return mu_; }
  double global_scalar_product() const { return big_x_; }
  const std::vector<CloudState>& clouds() const { return clouds_; }
  const std::vector<RuleConsequent>& consequents() const { return consequents_; }

  /// Normalised local densities of x over all rules.
  Vector firing_strengths(const Vector& x) const;

  /// Fuzzily weighted sum of the rule outputs at x.
  double predict(const Vector& x) const;

  double global_density(const Vector& w) const;

  /// Advances the sample counter and folds x into the global mean and
  /// average scalar product.
  void update_global(const Vector& x);

  /// Creates, merges or assigns according to the current structure mode.
  /// Must run after update_global() for the same sample.
  StructureAction evolve_structure(const Vector& x);

  /// Accumulates firing strengths, refreshes utilities and prunes stale
  /// rules. Returns the pre-removal indices of the pruned rules.
  std::vector<std::size_t> monitor_quality(const Vector& x);

  /// One FWRLS step on every rule towards `target`.
  void update_consequents(const Vector& x, double target);

  /// Full per-sample cycle. Returns the prediction made with the parameters
  /// held before this sample was seen.
  double learn_step(const Vector& x, double target);

  /// Outcome of the most recent evolve_structure() call.
  const StructureAction& last_action() const { return last_action_; }

  // Hooks for tests and benchmarks. They bypass the evolving conditions.

  /// Appends a fresh rule at `prototype` with the given consequent (or the
  /// mean of the existing ones when `coeffs` is empty).
  void append_rule(const Vector& prototype, const Vector& coeffs = Vector());
  void set_structure_mode(StructureMode mode) { config_.structure_mode = mode; }
  void set_consequent(std::size_t index, const RuleConsequent& consequent);
  void set_cloud(std::size_t index, const CloudState& cloud);

  /// Rebuilds a model from already-validated parts (used by deserialisation).
  static AlmmoModel from_parts(const EngineConfig& config, std::int64_t t, Vector mu,
                               double big_x, std::vector<CloudState> clouds,
                               std::vector<RuleConsequent> consequents);

 private:
  explicit AlmmoModel(const EngineConfig& config);

  void check_input(const Vector& x) const;
  std::size_t nearest_cloud(const Vector& x) const;
  void fill_extended(const Vector& x) const;
  void fill_weights(const Vector& x) const;
  Vector mean_coeffs() const;

  EngineConfig config_;
  std::int64_t t_{0};
  Vector mu_;
  double big_x_{0.0};
  std::vector<CloudState> clouds_;
  std::vector<RuleConsequent> consequents_;
  StructureAction last_action_;

  // Scratch buffers reused across steps.
  mutable Vector x_ext_;
  mutable Vector gain_;
  mutable Vector weights_;
};

}  // namespace sofpid::almmo

#endif  // SOFPID_ALMMO_HPP
