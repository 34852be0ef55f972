#include "geometry.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "errors.hpp"

namespace clusterkin {
namespace {

constexpr double kCmPerUm = 1e-4;
constexpr double kCm2PerUm2 = 1e-8;

void check_fraction(double f) {
  if (!(f > 0.0 && f <= 0.5)) {
    throw InvalidParameter("domain fraction f must lie in (0, 0.5], got " + std::to_string(f));
  }
}

}  // namespace

double GeometryParameters::radius_um() const {
  return cell_radius_um > 0.0 ? cell_radius_um : sphere_radius_um(area_um2);
}

void GeometryParameters::validate() const {
  if (!(area_um2 > 0.0) || !std::isfinite(area_um2)) {
    throw InvalidParameter("membrane area must be positive");
  }
  if (cell_radius_um < 0.0 || !std::isfinite(cell_radius_um)) {
    throw InvalidParameter("cell radius must be positive (or 0 for a sphere)");
  }
  if (!(gamma_out > 0.0) || !std::isfinite(gamma_out)) {
    throw InvalidParameter("gamma_out must be positive");
  }
  check_fraction(f);
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw InvalidParameter("alpha must be positive");
  }
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw InvalidParameter("beta must be nonnegative");
  }
}

double sphere_radius_um(double area_um2) {
  return std::sqrt(area_um2 / (4.0 * std::numbers::pi));
}

double boundary_length(double f, double r_cell_um, double area_um2) {
  check_fraction(f);
  if (!(r_cell_um > 0.0)) {
    throw InvalidParameter("cell radius must be positive");
  }
  const double cap_height = area_um2 * f / (2.0 * std::numbers::pi * r_cell_um);
  const double offset = r_cell_um - cap_height;
  const double chord2 = r_cell_um * r_cell_um - offset * offset;
  if (!(chord2 > 0.0)) {
    throw InvalidParameter("cap area exceeds the cell surface for this radius");
  }
  return 2.0 * std::numbers::pi * std::sqrt(chord2);
}

ExchangeRates exchange_rates(const GeometryParameters& geometry) {
  geometry.validate();
  ExchangeRates out{};
  out.boundary_um = boundary_length(geometry.f, geometry.radius_um(), geometry.area_um2);
  out.delta_s = (geometry.area_um2 * kCm2PerUm2) / (out.boundary_um * kCmPerUm * geometry.gamma_out);
  out.k1 = 1.0 / (out.delta_s * geometry.f);
  out.k2 = geometry.alpha / (out.delta_s * (1.0 - geometry.f));
  return out;
}

}  // namespace clusterkin
