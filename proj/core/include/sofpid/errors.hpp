#ifndef SOFPID_ERRORS_HPP
#define SOFPID_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sofpid {

/// A value handed to an engine, controller or plant violates its precondition
/// (wrong dimension, non-finite reading, ...). The receiver's state is unchanged.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configuration object or file is malformed or names something unknown.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sofpid

#endif  // SOFPID_ERRORS_HPP
