#include "model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "errors.hpp"

namespace clusterkin {
namespace {

constexpr std::array<std::string_view, kSpeciesCount> kSpeciesNames{
    "R1", "R2", "RR1", "RR2", "VR1", "VR2", "VRR1", "VRR2", "RVR1", "RVR2", "D1", "D2"};

constexpr std::array<std::string_view, kFluxCount> kFluxNames{
    "phi11", "phi12", "phi21", "phi22", "phi31", "phi32", "phi41", "phi42", "phi51", "phi52",
    "phi61", "phi62", "phi71", "phi72", "phi1",  "phi2",  "phi3",  "phi4",  "phi5",  "phi6"};

// Species bases; add 0 for domain 1, 1 for domain 2.
constexpr std::size_t kR = 0, kRR = 2, kVR = 4, kVRR = 6, kRVR = 8, kD = 10;

struct Term {
  std::size_t species_base;
  int coefficient;
};

struct ChemicalReaction {
  std::array<Term, 3> terms;
  std::size_t count;
};

// C1..C7, written once and instantiated in each domain. Free VEGF is held
// constant and does not appear.
constexpr std::array<ChemicalReaction, 7> kChemistry{{
    {{{{kR, -2}, {kRR, 1}, {}}}, 2},              // R + R <-> RR
    {{{{kVR, -1}, {kR, -1}, {kVRR, 1}}}, 3},      // VR + R <-> VRR
    {{{{kRR, -1}, {kVRR, 1}, {}}}, 2},            // RR + V <-> VRR
    {{{{kVRR, -1}, {kD, 1}, {}}}, 2},             // VRR <-> D
    {{{{kRVR, -1}, {kD, 1}, {}}}, 2},             // RVR <-> D
    {{{{kVR, -1}, {kR, -1}, {kRVR, 1}}}, 3},      // VR + R <-> RVR
    {{{{kR, -1}, {kVR, 1}, {}}}, 2},              // R + V <-> VR
}};

// D1..D6: species moved from domain 1 to domain 2.
constexpr std::array<std::size_t, 6> kExchanged{kR, kRR, kVR, kVRR, kRVR, kD};

void require_nonnegative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw InvalidParameter(std::string("rate constant ") + name + " must be finite and nonnegative");
  }
}

}  // namespace

std::string_view species_name(std::size_t index) { return kSpeciesNames.at(index); }

void RateConstants::validate() const {
  require_nonnegative(b, "b");
  require_nonnegative(d, "d");
  require_nonnegative(a, "a");
  require_nonnegative(c, "c");
  require_nonnegative(a_i, "a_i");
  require_nonnegative(c_i, "c_i");
  require_nonnegative(b_i, "b_i");
  require_nonnegative(d_i, "d_i");
  require_nonnegative(a_s, "a_s");
}

ModelParameters ModelParameters::create(const RateConstants& rates, const GeometryParameters& geometry,
                                        double v0_nM, double r_total) {
  rates.validate();
  geometry.validate();
  if (!(v0_nM >= 0.0) || !std::isfinite(v0_nM)) {
    throw InvalidParameter("ligand concentration V0 must be finite and nonnegative");
  }
  if (!(r_total > 0.0) || !std::isfinite(r_total)) {
    throw InvalidParameter("R_total must be positive");
  }
  return ModelParameters(rates, geometry, exchange_rates(geometry), v0_nM, r_total);
}

ReactionNetwork::ReactionNetwork() {
  for (std::size_t k = 0; k < kChemistry.size(); ++k) {
    for (std::size_t domain = 0; domain < 2; ++domain) {
      const std::size_t column = 2 * k + domain;
      for (std::size_t t = 0; t < kChemistry[k].count; ++t) {
        const Term& term = kChemistry[k].terms[t];
        gamma_[term.species_base + domain][column] += term.coefficient;
      }
    }
  }
  for (std::size_t j = 0; j < kExchanged.size(); ++j) {
    gamma_[kExchanged[j]][14 + j] = -1;
    gamma_[kExchanged[j] + 1][14 + j] = 1;
  }
}

Eigen::Matrix<double, kSpeciesCount, kFluxCount> ReactionNetwork::as_matrix() const {
  Eigen::Matrix<double, kSpeciesCount, kFluxCount> m;
  for (std::size_t i = 0; i < kSpeciesCount; ++i) {
    for (std::size_t j = 0; j < kFluxCount; ++j) m(i, j) = gamma_[i][j];
  }
  return m;
}

std::string_view ReactionNetwork::flux_name(std::size_t flux) { return kFluxNames.at(flux); }

const ReactionNetwork& reaction_network() {
  static const ReactionNetwork network;
  return network;
}

ReactionNetwork build_network(const ModelParameters&) { return reaction_network(); }

FluxVector flux_vector(const StateVector& x, const ModelParameters& params) {
  const RateConstants& k = params.rates();
  const double f1 = params.f();
  const double f2 = 1.0 - f1;
  const double v0 = params.v0();
  const double k1 = params.k1();
  const double k2 = params.k2();
  const double beta = params.beta();

  FluxVector phi{};
  const double fraction[2] = {f1, f2};
  for (std::size_t dom = 0; dom < 2; ++dom) {
    const double r = x[kR + dom];
    const double rr = x[kRR + dom];
    const double vr = x[kVR + dom];
    const double vrr = x[kVRR + dom];
    const double rvr = x[kRVR + dom];
    const double dd = x[kD + dom];
    const double fx = fraction[dom];
    phi[0 + dom] = 2.0 * k.b / fx * r * r - k.d * rr;
    phi[2 + dom] = k.b / fx * r * vr - k.d * vrr;
    phi[4 + dom] = 2.0 * k.a * v0 * rr - k.c * vrr;
    phi[6 + dom] = k.a_i * vrr - 2.0 * k.c_i * dd;
    phi[8 + dom] = k.b_i * rvr - k.d_i * dd;
    phi[10 + dom] = k.a_s / fx * r * vr - k.c * rvr;
    phi[12 + dom] = k.a * v0 * r - k.c * vr;
  }
  for (std::size_t j = 0; j < kExchanged.size(); ++j) {
    const double mobility = (j == 0 || j == 2) ? 1.0 : beta;
    const std::size_t s = kExchanged[j];
    phi[14 + j] = mobility * (k1 * x[s] - k2 * x[s + 1]);
  }
  return phi;
}

StateVector rhs(const StateVector& x, const ModelParameters& params) {
  const FluxVector phi = flux_vector(x, params);
  const auto& gamma = reaction_network().stoichiometry();
  StateVector dx{};
  for (std::size_t i = 0; i < kSpeciesCount; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < kFluxCount; ++j) {
      if (gamma[i][j] != 0) acc += gamma[i][j] * phi[j];
    }
    dx[i] = acc;
  }
  return dx;
}

Jacobian jacobian(const StateVector& x, const ModelParameters& params) {
  const RateConstants& k = params.rates();
  const double v0 = params.v0();
  const double fraction[2] = {params.f(), 1.0 - params.f()};

  // d(phi)/dx, one row per flux.
  Eigen::Matrix<double, kFluxCount, kSpeciesCount> dphi =
      Eigen::Matrix<double, kFluxCount, kSpeciesCount>::Zero();
  for (std::size_t dom = 0; dom < 2; ++dom) {
    const std::size_t r = kR + dom, rr = kRR + dom, vr = kVR + dom, vrr = kVRR + dom,
                      rvr = kRVR + dom, dd = kD + dom;
    const double fx = fraction[dom];
    dphi(0 + dom, r) = 4.0 * k.b / fx * x[r];
    dphi(0 + dom, rr) = -k.d;
    dphi(2 + dom, r) = k.b / fx * x[vr];
    dphi(2 + dom, vr) = k.b / fx * x[r];
    dphi(2 + dom, vrr) = -k.d;
    dphi(4 + dom, rr) = 2.0 * k.a * v0;
    dphi(4 + dom, vrr) = -k.c;
    dphi(6 + dom, vrr) = k.a_i;
    dphi(6 + dom, dd) = -2.0 * k.c_i;
    dphi(8 + dom, rvr) = k.b_i;
    dphi(8 + dom, dd) = -k.d_i;
    dphi(10 + dom, r) = k.a_s / fx * x[vr];
    dphi(10 + dom, vr) = k.a_s / fx * x[r];
    dphi(10 + dom, rvr) = -k.c;
    dphi(12 + dom, r) = k.a * v0;
    dphi(12 + dom, vr) = -k.c;
  }
  for (std::size_t j = 0; j < kExchanged.size(); ++j) {
    const double mobility = (j == 0 || j == 2) ? 1.0 : params.beta();
    dphi(14 + j, kExchanged[j]) = mobility * params.k1();
    dphi(14 + j, kExchanged[j] + 1) = -mobility * params.k2();
  }
  return reaction_network().as_matrix() * dphi;
}

Observables observables(const StateVector& x) {
  Observables o;
  o.signal_hd = x[index_of(Species::RVR1)] + x[index_of(Species::D1)];
  o.signal_ld = x[index_of(Species::RVR2)] + x[index_of(Species::D2)];
  o.signal_total = o.signal_hd + o.signal_ld;
  for (std::size_t i = 0; i < kSpeciesCount; i += 2) {
    o.receptors_hd += kReceptorWeights[i] * x[i];
    o.receptors_ld += kReceptorWeights[i + 1] * x[i + 1];
  }
  o.receptors_total = o.receptors_hd + o.receptors_ld;
  return o;
}

double receptor_total(const StateVector& x) {
  double sum = 0.0;
  for (std::size_t i = 0; i < kSpeciesCount; ++i) sum += kReceptorWeights[i] * x[i];
  return sum;
}

double inf_norm(const StateVector& x) {
  double m = 0.0;
  for (double v : x) {
    if (std::isnan(v)) return v;
    m = std::max(m, std::abs(v));
  }
  return m;
}

}  // namespace clusterkin
