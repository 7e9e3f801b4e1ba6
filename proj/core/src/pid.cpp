#include "sofpid/pid.hpp"

#include <cmath>

#include "sofpid/errors.hpp"

namespace sofpid::control {

double pid_output(const PidGains& gains, double eps, double sigma, double delta) {
  return gains.p * eps + gains.i * sigma + gains.d * delta;
}

ErrorSignals ErrorTracker::peek(double r, double y) const {
  ErrorSignals s;
  s.eps = orientation_ == ErrorOrientation::kPaperEq1 ? r - y : y - r;
  s.sigma = sigma_;
  s.delta = steps_ == 0 ? 0.0 : s.eps - eps_prev_;
  return s;
}

ErrorSignals ErrorTracker::advance(double r, double y) {
  const ErrorSignals s = peek(r, y);
  sigma_ += s.eps;
  eps_prev_ = s.eps;
  ++steps_;
  return s;
}

double PidController::step(double r, double y) {
  if (!std::isfinite(r) || !std::isfinite(y)) throw InvalidInput("pid: non-finite reading");
  last_ = tracker_.advance(r, y);
  return pid_output(gains_, last_.eps, last_.sigma, last_.delta);
}

}  // namespace sofpid::control
