#pragma once

#include <span>
#include <vector>

#include "model.hpp"

namespace clusterkin {

struct IntegratorConfig {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;        ///< fmol/cm^2
  double max_step = 0.0;         ///< s; 0 = unbounded
  double t_max = 1e6;            ///< s; horizon for relax_to_steady
  double steady_norm_tol = 1e-10;

  void validate() const;
};

struct Sample {
  double t;
  StateVector x;
};

/// Samples in increasing time order.
using Trajectory = std::vector<Sample>;

/// Integrates dx/dt = rhs(x) from x0 at sample_times.front() and records the
/// state at every requested time (the integrator lands on each exactly).
/// Requires x0 >= 0 componentwise and strictly increasing sample times.
/// Throws IntegrationError on step-size underflow or a non-finite derivative.
Trajectory integrate(const StateVector& x0, const ModelParameters& params,
                     std::span<const double> sample_times, const IntegratorConfig& cfg = {});

/// `samples` evenly spaced points over [t0, t1], both ends included.
Trajectory integrate(const StateVector& x0, const ModelParameters& params, double t0, double t1,
                     std::size_t samples, const IntegratorConfig& cfg = {});

struct RelaxResult {
  StateVector state{};
  double t = 0.0;
  double rhs_norm = 0.0;  ///< ||rhs(state)||_inf
  bool converged = false;
};

/// Integrates until ||rhs(x)||_inf < steady_norm_tol * max(1, ||x||_inf) or
/// t_max is reached. Non-convergence is reported through the flag.
RelaxResult relax_to_steady(const StateVector& x0, const ModelParameters& params,
                            const IntegratorConfig& cfg = {});

/// All receptors as monomers, split f : (1 - f) between the domains.
StateVector partitioned_monomers(const ModelParameters& params);

}  // namespace clusterkin
