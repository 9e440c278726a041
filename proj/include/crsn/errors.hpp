#ifndef CRSN_ERRORS_HPP
#define CRSN_ERRORS_HPP

#include <utility>
#include <stdexcept>
#include <string>

namespace crsn {

/// Input outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A design constraint of the optimization problem is violated. `constraint()`
/// names it, e.g. "tau_t < tau_max" or "r_s < r_p".
class ConstraintViolation : public std::domain_error {
 public:
  ConstraintViolation(std::string constraint, const std::string& detail)
      : std::domain_error(constraint + " violated: " + detail),
        constraint_(std::move(constraint)) {}

  const std::string& constraint() const noexcept { return constraint_; }

 private:
  std::string constraint_;
};

/// The per-slot success probability is zero, so the expected energy and time
/// to a successful frame transmission diverge.
class UnreachableSft : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Derived probabilities failed an internal identity (e.g. a row sum).
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace detail {

inline constexpr double kProbabilitySlack = 1e-12;

/// Rejects p outside [0, 1] beyond a 1e-12 slack. Values inside the slack are
/// returned clamped.
double checked_probability(double p, const char* what);

/// Shortest round-trippable text for a value in error messages.
std::string format_value(double v);

}  // namespace detail
}  // namespace crsn

#endif  // CRSN_ERRORS_HPP
