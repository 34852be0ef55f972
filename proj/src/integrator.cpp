#include "integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dopri5.hpp"
#include "errors.hpp"

namespace clusterkin {
namespace {

auto make_stepper(const ModelParameters& params, const IntegratorConfig& cfg) {
  auto f = [&params](double, const StateVector& x, StateVector& dx) { dx = rhs(x, params); };
  using Stepper = DormandPrince45<kSpeciesCount, decltype(f)>;
  typename Stepper::Options opt;
  opt.rel_tol = cfg.rel_tol;
  opt.abs_tol = cfg.abs_tol;
  opt.max_step = cfg.max_step;
  return Stepper(f, opt);
}

void check_initial_state(const StateVector& x0) {
  for (std::size_t i = 0; i < kSpeciesCount; ++i) {
    if (!(x0[i] >= 0.0) || !std::isfinite(x0[i])) {
      throw InvalidParameter("initial concentration of " + std::string(species_name(i)) +
                             " must be finite and nonnegative");
    }
  }
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw InvalidParameter("integrator tolerances must be positive");
  }
  if (!(t_max > 0.0)) throw InvalidParameter("t_max must be positive");
  if (max_step < 0.0) throw InvalidParameter("max_step must be nonnegative");
  if (!(steady_norm_tol > 0.0)) throw InvalidParameter("steady_norm_tol must be positive");
}

Trajectory integrate(const StateVector& x0, const ModelParameters& params,
                     std::span<const double> sample_times, const IntegratorConfig& cfg) {
  cfg.validate();
  check_initial_state(x0);
  if (sample_times.empty()) throw InvalidParameter("at least one sample time is required");
  for (std::size_t i = 1; i < sample_times.size(); ++i) {
    if (!(sample_times[i] > sample_times[i - 1])) {
      throw InvalidParameter("sample times must be strictly increasing");
    }
  }

  auto stepper = make_stepper(params, cfg);
  Trajectory out;
  out.reserve(sample_times.size());
  double t = sample_times.front();
  StateVector x = x0;
  out.push_back({t, x});
  for (std::size_t i = 1; i < sample_times.size(); ++i) {
    stepper.advance(t, x, sample_times[i]);
    out.push_back({t, x});
  }
  return out;
}

Trajectory integrate(const StateVector& x0, const ModelParameters& params, double t0, double t1,
                     std::size_t samples, const IntegratorConfig& cfg) {
  if (!(t1 > t0)) throw InvalidParameter("time span must be nonempty");
  if (samples < 2) throw InvalidParameter("need at least two samples");
  std::vector<double> times(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    times[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(samples - 1);
  }
  times.back() = t1;
  return integrate(x0, params, times, cfg);
}

RelaxResult relax_to_steady(const StateVector& x0, const ModelParameters& params,
                            const IntegratorConfig& cfg) {
  cfg.validate();
  check_initial_state(x0);

  RelaxResult result;
  result.state = x0;
  const auto converged = [&cfg](const StateVector& x, const StateVector& dx) {
    return inf_norm(dx) < cfg.steady_norm_tol * std::max(1.0, inf_norm(x));
  };
  const StateVector dx0 = rhs(x0, params);
  if (converged(x0, dx0)) {
    result.rhs_norm = inf_norm(dx0);
    result.converged = true;
    return result;
  }

  auto stepper = make_stepper(params, cfg);
  double t = 0.0;
  result.converged = stepper.advance(t, result.state, cfg.t_max,
                                     [&](double, const StateVector& x, const StateVector& dx) {
                                       return converged(x, dx);
                                     });
  result.t = t;
  result.rhs_norm = inf_norm(rhs(result.state, params));
  return result;
}

StateVector partitioned_monomers(const ModelParameters& params) {
  StateVector x{};
  x[index_of(Species::R1)] = params.f() * params.r_total();
  x[index_of(Species::R2)] = (1.0 - params.f()) * params.r_total();
  return x;
}

}  // namespace clusterkin
