#pragma once

#include <stdexcept>
#include <string>

namespace ebsvp {

// Raised when an operation is called outside its preconditions
// (delta outside (0,1), too few samples, values outside [0,1], ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void require(bool condition, const char* message) {
  if (!condition) throw ParameterError(message);
}

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ParameterError(message);
}

// delta must lie strictly inside (0,1); 0 and 1 are rejected, not treated as limits.
inline void require_delta(double delta) {
  require(delta > 0.0 && delta < 1.0, "delta must lie strictly in (0,1)");
}

}  // namespace detail
}  // namespace ebsvp
