#include "crsn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace crsn::detail {

double checked_probability(double p, const char* what) {
  if (!std::isfinite(p) || p < -kProbabilitySlack || p > 1.0 + kProbabilitySlack) {
    throw ConsistencyError(std::string(what) + " = " + format_value(p) +
                           " is not a probability");
  }
  return std::clamp(p, 0.0, 1.0);
}

std::string format_value(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace crsn::detail
