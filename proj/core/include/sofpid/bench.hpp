#ifndef SOFPID_BENCH_HPP
#define SOFPID_BENCH_HPP

#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "sofpid/almmo.hpp"

namespace sofpid::harness {

struct BenchRow {
  int rules{0};
  double ns_per_step{0.0};  ///< median over repetitions
};

struct BenchTable {
  int input_dim{0};
  std::vector<BenchRow> rows;
  double slope_ns_per_rule{0.0};  ///< least-squares fit of time against M
  double intercept_ns{0.0};

  /// time(M = last) / time(M = first)
  double end_to_end_ratio() const;
};

/// Engine with exactly `rules` rules at random prototypes, pinned with
/// StructureMode::kAssignOnly so learn_step never adds or prunes.
almmo::AlmmoModel make_pinned_model(int input_dim, int rules, std::uint64_t seed);

/// Median per-learn_step wall time for each rule count.
BenchTable bench_complexity(int input_dim, const std::vector<int>& rule_counts,
                            int steps_per_rep = 20000, int reps = 7, std::uint64_t seed = 1);

nlohmann::json to_json(const BenchTable& table);

}  // namespace sofpid::harness

#endif  // SOFPID_BENCH_HPP
