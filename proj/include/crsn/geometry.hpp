#ifndef CRSN_GEOMETRY_HPP
#define CRSN_GEOMETRY_HPP

// Greedy (least remaining distance) forwarding geometry in a disk-shaped field
// of radius Gamma with the sink at its center.

namespace crsn {

struct FieldGeometry {
  double big_gamma = 1000.0;  ///< field radius Gamma, m
  double rho_s = 0.01;        ///< SU density, nodes/m^2
  double r_s = 100.0;         ///< common SU transmission range, m

  /// Throws DomainError unless 0 < r_s <= big_gamma and rho_s > 0.
  void validate() const;
};

struct HopGeometry {
  double expected_progress = 0.0;  ///< E{W}, m
  double expected_distance = 0.0;  ///< E{Z}, m
  double phi_max = 0.0;            ///< acos(E{W} / r_s), rad
};

/// High-density expected hop progress E{W} = r_s - r_s^3 / (3 Gamma^2).
double expected_hop_progress(double r_s, double big_gamma);

/// Expected transmitter-receiver distance for progress w, taking the receiver
/// on the chord at distance w with angle uniform in [-phi_max, phi_max]:
/// (w / phi_max) ln(sec phi_max + tan phi_max).
double expected_hop_distance(double w, double r_s);

HopGeometry hop_geometry(const FieldGeometry& field);

}  // namespace crsn

#endif  // CRSN_GEOMETRY_HPP
