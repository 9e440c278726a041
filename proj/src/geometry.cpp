#include "crsn/geometry.hpp"

#include <cmath>

#include "crsn/errors.hpp"

namespace crsn {

using detail::format_value;

namespace {
// Below this angle the closed form is replaced by its limit w. The relative
// gap at the switch is phi^2 / 6, far under double precision.
constexpr double kSmallAngle = 1e-6;
}  // namespace

void FieldGeometry::validate() const {
  if (!(big_gamma > 0.0) || !std::isfinite(big_gamma)) {
    throw DomainError("field radius must be positive, got " + format_value(big_gamma));
  }
  if (!(rho_s > 0.0) || !std::isfinite(rho_s)) {
    throw DomainError("SU density must be positive, got " + format_value(rho_s));
  }
  if (!(r_s > 0.0) || r_s > big_gamma) {
    throw DomainError("transmission range must lie in (0, Gamma], got r_s = " +
                      format_value(r_s));
  }
}

double expected_hop_progress(double r_s, double big_gamma) {
  if (!(big_gamma > 0.0)) {
    throw DomainError("field radius must be positive, got " + format_value(big_gamma));
  }
  if (!(r_s > 0.0) || r_s > big_gamma) {
    throw DomainError("hop progress needs 0 < r_s <= Gamma (r_s = " + format_value(r_s) +
                      ", Gamma = " + format_value(big_gamma) + ")");
  }
  return r_s - r_s * r_s * r_s / (3.0 * big_gamma * big_gamma);
}

double expected_hop_distance(double w, double r_s) {
  if (!(w > 0.0) || !(w <= r_s)) {
    throw DomainError("hop distance needs 0 < w <= r_s (w = " + format_value(w) +
                      ", r_s = " + format_value(r_s) + ")");
  }
  const double phi = std::acos(w / r_s);
  if (phi < kSmallAngle) return w;
  // ln(sec + tan) = asinh(tan), which avoids the cancellation near phi = 0.
  return w / phi * std::asinh(std::tan(phi));
}

HopGeometry hop_geometry(const FieldGeometry& field) {
  field.validate();
  HopGeometry out;
  out.expected_progress = expected_hop_progress(field.r_s, field.big_gamma);
  out.expected_distance = expected_hop_distance(out.expected_progress, field.r_s);
  out.phi_max = std::acos(out.expected_progress / field.r_s);
  return out;
}

}  // namespace crsn
