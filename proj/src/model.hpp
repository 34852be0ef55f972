#pragma once

#include <array>
#include <cstddef>
#include <string_view>

#include <Eigen/Core>

#include "geometry.hpp"

namespace clusterkin {

inline constexpr std::size_t kSpeciesCount = 12;
inline constexpr std::size_t kFluxCount = 20;

/// State-vector slots. Each species appears twice: domain 1 (high density)
/// first, then domain 2. D is the fully bonded dimer (Delta).
enum class Species : std::size_t { R1, R2, RR1, RR2, VR1, VR2, VRR1, VRR2, RVR1, RVR2, D1, D2 };

constexpr std::size_t index_of(Species s) { return static_cast<std::size_t>(s); }

std::string_view species_name(std::size_t index);

/// Effective concentrations (amount in a domain over the whole membrane
/// area), fmol/cm^2.
using StateVector = std::array<double, kSpeciesCount>;

/// Net reaction fluxes in the order phi11, phi12, phi21, ..., phi71, phi72,
/// then the six exchange fluxes phi1..phi6.
using FluxVector = std::array<double, kFluxCount>;

using Jacobian = Eigen::Matrix<double, kSpeciesCount, kSpeciesCount>;

/// Receptors per molecule of each species. Left null vector of the
/// stoichiometry matrix.
inline constexpr std::array<int, kSpeciesCount> kReceptorWeights{1, 1, 2, 2, 1, 1, 2, 2, 2, 2, 2, 2};

/// Mass-action rate constants. Units: b, a_s in cm^2/(fmol s); a in 1/(nM s);
/// the rest in 1/s.
struct RateConstants {
  double b = 0.1;
  double d = 0.01;
  double a = 0.0044;
  double c = 0.026;
  double a_i = 0.949;
  double c_i = 0.026;
  double b_i = 0.446;
  double d_i = 0.02;
  double a_s = 0.21;

  void validate() const;
};

/// One immutable scenario point. Exchange constants are derived from the
/// geometry on construction and never set directly.
class ModelParameters {
 public:
  /// Throws InvalidParameter if any input is out of range.
  static ModelParameters create(const RateConstants& rates, const GeometryParameters& geometry,
                                double v0_nM, double r_total);

  const RateConstants& rates() const noexcept { return rates_; }
  const GeometryParameters& geometry() const noexcept { return geometry_; }
  const ExchangeRates& exchange() const noexcept { return exchange_; }
  double v0() const noexcept { return v0_; }
  double r_total() const noexcept { return r_total_; }
  double f() const noexcept { return geometry_.f; }
  double alpha() const noexcept { return geometry_.alpha; }
  double beta() const noexcept { return geometry_.beta; }
  double k1() const noexcept { return exchange_.k1; }
  double k2() const noexcept { return exchange_.k2; }
  double delta() const noexcept { return exchange_.delta_s; }

 private:
  ModelParameters(const RateConstants& rates, const GeometryParameters& geometry,
                  const ExchangeRates& exchange, double v0, double r_total)
      : rates_(rates), geometry_(geometry), exchange_(exchange), v0_(v0), r_total_(r_total) {}

  RateConstants rates_;
  GeometryParameters geometry_;
  ExchangeRates exchange_;
  double v0_;
  double r_total_;
};

/// The 20 reversible reactions of the two-domain network and their
/// stoichiometry. The matrix does not depend on parameter values.
class ReactionNetwork {
 public:
  using Matrix = std::array<std::array<int, kFluxCount>, kSpeciesCount>;

  ReactionNetwork();

  const Matrix& stoichiometry() const noexcept { return gamma_; }
  int operator()(std::size_t species, std::size_t flux) const { return gamma_[species][flux]; }
  Eigen::Matrix<double, kSpeciesCount, kFluxCount> as_matrix() const;

  static std::string_view flux_name(std::size_t flux);

 private:
  Matrix gamma_{};
};

/// Shared instance; the network is immutable.
const ReactionNetwork& reaction_network();

ReactionNetwork build_network(const ModelParameters& params);

/// Mass-action fluxes at state x. Negative entries are accepted (root finders
/// probe outside the positive orthant); non-finite values propagate.
FluxVector flux_vector(const StateVector& x, const ModelParameters& params);

/// dx/dt = Gamma * Phi(x).
StateVector rhs(const StateVector& x, const ModelParameters& params);

/// d(rhs)/dx, analytic.
Jacobian jacobian(const StateVector& x, const ModelParameters& params);

struct Observables {
  double signal_total = 0.0;
  double signal_hd = 0.0;
  double signal_ld = 0.0;
  double receptors_hd = 0.0;
  double receptors_ld = 0.0;
  double receptors_total = 0.0;
};

/// Signaling complexes (RVR + Delta) and receptor totals per domain.
Observables observables(const StateVector& x);

/// Receptor-weighted sum w.x.
double receptor_total(const StateVector& x);

double inf_norm(const StateVector& x);

}  // namespace clusterkin
