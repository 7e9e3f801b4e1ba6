#ifndef SOFPID_PID_HPP
#define SOFPID_PID_HPP

#include <cstdint>

namespace sofpid::control {

struct PidGains {
  double p{0.25};
  double i{0.0};
  double d{0.1};
};

/// u = P*eps + I*sigma + D*delta
double pid_output(const PidGains& gains, double eps, double sigma, double delta);

/// Sign convention for the tracking error.
///   kPaperEq1:        eps = r - y
///   kDistancePositive: eps = y - r  (positive while the robot is short of the target)
enum class ErrorOrientation { kPaperEq1, kDistancePositive };

/// Error signals of one control step.
struct ErrorSignals {
  double eps{0.0};
  double sigma{0.0};  ///< sum of all previous errors, current one excluded
  double delta{0.0};  ///< eps - eps_prev; zero on the first step
};

/// Tracking-error bookkeeping shared by every controller in this library.
///
/// The integral lags by one step: the error of step t first enters sigma at
/// step t+1.
class ErrorTracker {
 public:
  explicit ErrorTracker(ErrorOrientation orientation = ErrorOrientation::kDistancePositive)
      : orientation_(orientation) {}

  /// Computes the signals for the reading (r, y) and advances the state.
  ErrorSignals advance(double r, double y);

  /// Signals advance() would return, without committing.
  ErrorSignals peek(double r, double y) const;

  ErrorOrientation orientation() const { return orientation_; }
  std::int64_t steps() const { return steps_; }
  double sigma() const { return sigma_; }
  double eps_prev() const { return eps_prev_; }

  void restore(std::int64_t steps, double sigma, double eps_prev) {
    steps_ = steps;
    sigma_ = sigma;
    eps_prev_ = eps_prev;
  }

 private:
  ErrorOrientation orientation_;
  std::int64_t steps_{0};
  double sigma_{0.0};
  double eps_prev_{0.0};
};

/// Fixed-gain discrete PID on top of ErrorTracker; the priming controller and
/// the PID baseline are both this class.
class PidController {
 public:
  explicit PidController(PidGains gains = {},
                         ErrorOrientation orientation = ErrorOrientation::kDistancePositive)
      : gains_(gains), tracker_(orientation) {}

  /// Throws InvalidInput on non-finite readings.
  double step(double r, double y);

  const ErrorSignals& last_signals() const { return last_; }
  const PidGains& gains() const { return gains_; }

 private:
  PidGains gains_;
  ErrorTracker tracker_;
  ErrorSignals last_;
};

}  // namespace sofpid::control

#endif  // SOFPID_PID_HPP
