#pragma once

namespace clusterkin {

/// Membrane geometry and mobility inputs for the two-domain model.
///
/// Domain 1 is the high-density (attractive) region covering a fraction `f` of
/// the membrane; domain 2 is the remainder. Lengths are in micrometres, the
/// boundary permeability in cm/s.
struct GeometryParameters {
  double area_um2 = 1000.0;     ///< total membrane area A_cell
  double cell_radius_um = 0.0;  ///< 0 selects the sphere radius for area_um2
  double gamma_out = 8.23e-6;   ///< outbound boundary permeability, cm/s
  double f = 0.1;               ///< area fraction of the high-density domain
  double alpha = 5.0;           ///< inbound/outbound permeability ratio
  double beta = 0.5;            ///< exchange-rate multiplier for dimers

  /// Radius actually used: cell_radius_um if set, else the sphere radius.
  double radius_um() const;

  /// Throws InvalidParameter when any field is out of range.
  void validate() const;
};

struct ExchangeRates {
  double boundary_um;  ///< L0
  double delta_s;      ///< common exchange time constant
  double k1;           ///< exit rate from domain 1, 1/s
  double k2;           ///< entry rate into domain 1, 1/s
};

/// Radius of a sphere with the given surface area.
double sphere_radius_um(double area_um2);

/// Circumference of a spherical cap covering a fraction f of a cell membrane
/// of the given area:  2*pi*sqrt(r^2 - (r - f*A/(2*pi*r))^2).
/// Requires 0 < f <= 0.5 and r > 0.
double boundary_length(double f, double r_cell_um, double area_um2 = 1000.0);

/// L0, delta = A_cell/(L0*gamma_out) and k1 = 1/(delta*f),
/// k2 = alpha/(delta*(1-f)). Lengths and areas are converted to cm.
ExchangeRates exchange_rates(const GeometryParameters& geometry);

}  // namespace clusterkin
