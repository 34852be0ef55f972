#include "steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include <Eigen/LU>
#include <boost/math/tools/toms748_solve.hpp>

#include "cubic.hpp"
#include "errors.hpp"

namespace clusterkin {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Row indices within the dependent block.
constexpr std::size_t kRowVR1 = 2, kRowVR2 = 3, kRowY2 = 10;

std::vector<double> to_vector(const StateVector& x) { return {x.begin(), x.end()}; }

// Zero leading coefficients that cannot matter at the physical scale: a term
// c_k S^k below 1e-12 of the rest only produces roots beyond ~1e12 S.
void drop_negligible_leading(std::array<double, 4>& c, double scale) {
  for (int k = 3; k >= 1; --k) {
    if (c[k] == 0.0) continue;
    double rest = 0.0;
    for (int j = 0; j < k; ++j) rest += std::abs(c[j]) * std::pow(scale, j);
    if (std::abs(c[k]) * std::pow(scale, k) <= 1e-12 * rest) {
      c[k] = 0.0;
    } else {
      break;
    }
  }
}

double branch_residual(double r1, std::size_t branch, const EliminationCoefficients& coeffs,
                       const ModelParameters& params) {
  const auto branches = assemble_branches(r1, coeffs, params);
  if (branch >= branches.size()) {
    throw AssemblyError("cubic branch vanished inside its bracket", static_cast<int>(branches.size()));
  }
  return receptor_total(branches[branch]) - params.r_total();
}

double refine_bracket(const ConservationBracket& bracket, const EliminationCoefficients& coeffs,
                      const ModelParameters& params) {
  if (bracket.g_lo == 0.0) return bracket.lo;
  if (bracket.g_hi == 0.0) return bracket.hi;
  auto g = [&](double r1) { return branch_residual(r1, bracket.branch, coeffs, params); };
  std::uintmax_t max_iter = 200;
  const auto tol = [](double a, double b) {
    return std::abs(b - a) <= 4.0 * kEps * std::max(std::abs(a), std::abs(b));
  };
  const auto [a, b] = boost::math::tools::toms748_solve(g, bracket.lo, bracket.hi, bracket.g_lo,
                                                         bracket.g_hi, tol, max_iter);
  const double ga = std::abs(g(a));
  const double gb = std::abs(g(b));
  return ga <= gb ? a : b;
}

using Residual = Eigen::Matrix<double, kSpeciesCount, 1>;

// Conservation in slot 0 (the [R1] row is implied by the others).
Residual newton_residual(const StateVector& x, const ModelParameters& params) {
  const StateVector dx = rhs(x, params);
  Residual r;
  r(0) = receptor_total(x) - params.r_total();
  for (std::size_t i = 1; i < kSpeciesCount; ++i) r(static_cast<Eigen::Index>(i)) = dx[i];
  return r;
}

}  // namespace

int ExpandedSystem::rank() const {
  Eigen::FullPivLU<Eigen::Matrix<double, kSpeciesCount, kExpandedCount>> lu(matrix);
  lu.setThreshold(1e-12);
  return static_cast<int>(lu.rank());
}

ExpandedSystem expanded_matrix(const ModelParameters& params) {
  const RateConstants& k = params.rates();
  const double fraction[2] = {params.f(), 1.0 - params.f()};
  const double v0 = params.v0();

  ExpandedSystem sys;
  auto& ae = sys.flux_map;
  ae.setZero();
  for (std::size_t dom = 0; dom < 2; ++dom) {
    const Eigen::Index r = dom, rr = 2 + dom, vr = 4 + dom, vrr = 6 + dom, rvr = 8 + dom,
                       dd = 10 + dom;
    const Eigen::Index square = kX1 + dom;  // [Rx]^2
    const Eigen::Index bilinear = dom == 0 ? kY1 : kY2;  // [Rx][VRx]
    const double fx = fraction[dom];
    const Eigen::Index row = static_cast<Eigen::Index>(dom);
    ae(0 + row, square) = 2.0 * k.b / fx;
    ae(0 + row, rr) = -k.d;
    ae(2 + row, bilinear) = k.b / fx;
    ae(2 + row, vrr) = -k.d;
    ae(4 + row, rr) = 2.0 * k.a * v0;
    ae(4 + row, vrr) = -k.c;
    ae(6 + row, vrr) = k.a_i;
    ae(6 + row, dd) = -2.0 * k.c_i;
    ae(8 + row, rvr) = k.b_i;
    ae(8 + row, dd) = -k.d_i;
    ae(10 + row, bilinear) = k.a_s / fx;
    ae(10 + row, rvr) = -k.c;
    ae(12 + row, r) = k.a * v0;
    ae(12 + row, vr) = -k.c;
  }
  for (Eigen::Index j = 0; j < 6; ++j) {
    const double mobility = (j == 0 || j == 2) ? 1.0 : params.beta();
    ae(14 + j, 2 * j) = mobility * params.k1();
    ae(14 + j, 2 * j + 1) = -mobility * params.k2();
  }
  sys.matrix = reaction_network().as_matrix() * ae;
  return sys;
}

ExpandedVector expanded_vector(const StateVector& x) {
  ExpandedVector e;
  for (std::size_t i = 0; i < kSpeciesCount; ++i) e(static_cast<Eigen::Index>(i)) = x[i];
  e(kX1) = x[0] * x[0];
  e(kX2) = x[1] * x[1];
  e(kY1) = x[0] * x[index_of(Species::VR1)];
  e(kY2) = x[1] * x[index_of(Species::VR2)];
  return e;
}

Eigen::Matrix<double, 11, 1> EliminationCoefficients::apply(double r1, double r2, double x1,
                                                            double x2, double y1) const {
  Eigen::Matrix<double, 5, 1> free;
  free << r1, r2, x1, x2, y1;
  return a * free;
}

EliminationCoefficients eliminate_dependents(const ExpandedSystem& sys) {
  // Row 0 ([R1]) is a combination of the others through receptor conservation.
  const Eigen::Matrix<double, 11, kExpandedCount> retained = sys.matrix.bottomRows<11>();
  Eigen::Matrix<double, 11, 11> dependent;
  Eigen::Matrix<double, 11, 5> free;
  for (std::size_t j = 0; j < kDependentColumns.size(); ++j) {
    dependent.col(static_cast<Eigen::Index>(j)) = retained.col(static_cast<Eigen::Index>(kDependentColumns[j]));
  }
  for (std::size_t j = 0; j < kFreeColumns.size(); ++j) {
    free.col(static_cast<Eigen::Index>(j)) = retained.col(static_cast<Eigen::Index>(kFreeColumns[j]));
  }

  Eigen::FullPivLU<Eigen::Matrix<double, 11, 11>> lu(dependent);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) {
    throw SingularSystem("dependent block of the expanded system has rank " +
                         std::to_string(lu.rank()) + " < 11");
  }
  const auto& pivots = lu.matrixLU().diagonal().cwiseAbs();

  EliminationCoefficients out;
  out.a = -lu.solve(free);
  out.pivot_ratio = pivots.minCoeff() / pivots.maxCoeff();
  return out;
}

std::vector<StateVector> assemble_branches(double r1, const EliminationCoefficients& coeffs,
                                           const ModelParameters& params) {
  const auto& a = coeffs.a;
  // [VR1] appears on both sides of its own row through Y1 = r1 [VR1].
  const double denom = 1.0 - a(kRowVR1, 4) * r1;
  if (!(std::abs(denom) > 1e-12)) {
    throw AssemblyError("singular [VR1] slice at r1 = " + std::to_string(r1), 0);
  }
  // [VR1] = p0 + p1 R2 + p2 R2^2
  const double p0 = (a(kRowVR1, 0) * r1 + a(kRowVR1, 2) * r1 * r1) / denom;
  const double p1 = a(kRowVR1, 1) / denom;
  const double p2 = a(kRowVR1, 3) / denom;
  // [VR2] = q0 + q1 R2 + q2 R2^2
  const double q0 = a(kRowVR2, 0) * r1 + a(kRowVR2, 2) * r1 * r1 + a(kRowVR2, 4) * r1 * p0;
  const double q1 = a(kRowVR2, 1) + a(kRowVR2, 4) * r1 * p1;
  const double q2 = a(kRowVR2, 3) + a(kRowVR2, 4) * r1 * p2;
  // Y2 row: s0 + s1 R2 + s2 R2^2, which must equal R2 [VR2].
  const double s0 = a(kRowY2, 0) * r1 + a(kRowY2, 2) * r1 * r1 + a(kRowY2, 4) * r1 * p0;
  const double s1 = a(kRowY2, 1) + a(kRowY2, 4) * r1 * p1;
  const double s2 = a(kRowY2, 3) + a(kRowY2, 4) * r1 * p2;

  std::array<double, 4> cubic{-s0, q0 - s1, q1 - s2, q2};
  drop_negligible_leading(cubic, params.r_total());
  const std::vector<double> roots = real_cubic_roots(cubic[3], cubic[2], cubic[1], cubic[0]);

  const double floor = -1e-12 * params.r_total();
  std::vector<StateVector> branches;
  for (double r2 : roots) {
    if (!(r2 > 0.0) || !std::isfinite(r2)) continue;
    const double vr1 = p0 + p1 * r2 + p2 * r2 * r2;
    const auto y = coeffs.apply(r1, r2, r1 * r1, r2 * r2, r1 * vr1);
    StateVector x{};
    x[0] = r1;
    x[1] = r2;
    for (std::size_t i = 0; i < 10; ++i) x[i + 2] = y(static_cast<Eigen::Index>(i));
    const bool admissible =
        std::all_of(x.begin(), x.end(), [floor](double v) { return std::isfinite(v) && v >= floor; });
    if (admissible) branches.push_back(x);
  }
  // Double roots come back twice; keep one.
  branches.erase(std::unique(branches.begin(), branches.end(),
                             [](const StateVector& u, const StateVector& v) {
                               return std::abs(u[1] - v[1]) <= 1e-14 * std::max(1.0, std::abs(v[1]));
                             }),
                 branches.end());
  return branches;
}

StateVector assemble_state(double r1, const EliminationCoefficients& coeffs,
                           const ModelParameters& params) {
  auto branches = assemble_branches(r1, coeffs, params);
  if (branches.size() != 1) {
    throw AssemblyError(std::to_string(branches.size()) + " admissible [R2] roots at r1 = " +
                            std::to_string(r1),
                        static_cast<int>(branches.size()));
  }
  return branches.front();
}

double conservation_residual(double r1, const EliminationCoefficients& coeffs,
                             const ModelParameters& params) {
  return receptor_total(assemble_state(r1, coeffs, params)) - params.r_total();
}

ConservationScan scan_conservation(const EliminationCoefficients& coeffs,
                                   const ModelParameters& params, std::size_t probe_count) {
  if (probe_count < 2) throw InvalidParameter("conservation scan needs at least two probes");
  ConservationScan scan;
  const double hi = params.r_total();
  const double lo = 1e-9 * hi;
  scan.probes.resize(probe_count);
  for (std::size_t i = 0; i < probe_count; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(probe_count - 1);
    scan.probes[i] = lo * std::pow(hi / lo, s);
  }
  scan.probes.back() = hi;

  scan.residuals.resize(probe_count);
  std::size_t max_branches = 0;
  for (std::size_t i = 0; i < probe_count; ++i) {
    try {
      for (const auto& x : assemble_branches(scan.probes[i], coeffs, params)) {
        scan.residuals[i].push_back(receptor_total(x) - params.r_total());
      }
    } catch (const AssemblyError&) {
      ++scan.failed_probes;
    }
    if (scan.residuals[i].size() > 1) ++scan.multi_branch_probes;
    max_branches = std::max(max_branches, scan.residuals[i].size());
  }

  for (std::size_t branch = 0; branch < max_branches; ++branch) {
    for (std::size_t i = 0; i + 1 < probe_count; ++i) {
      const auto& left = scan.residuals[i];
      const auto& right = scan.residuals[i + 1];
      if (branch >= left.size() || branch >= right.size()) continue;
      const double gl = left[branch];
      const double gr = right[branch];
      if ((gl < 0.0) != (gr < 0.0)) {
        scan.brackets.push_back({branch, scan.probes[i], scan.probes[i + 1], gl, gr});
      }
    }
  }
  return scan;
}

const char* to_string(SolverPath path) {
  return path == SolverPath::semianalytic ? "semianalytic" : "numeric";
}

const char* to_string(SolverPreference pref) {
  switch (pref) {
    case SolverPreference::automatic: return "auto";
    case SolverPreference::semianalytic: return "semianalytic";
    case SolverPreference::numeric: return "numeric";
  }
  return "auto";
}

SolverPreference parse_solver_preference(const std::string& name) {
  if (name == "auto" || name == "automatic") return SolverPreference::automatic;
  if (name == "semianalytic") return SolverPreference::semianalytic;
  if (name == "numeric") return SolverPreference::numeric;
  throw InvalidParameter("unknown solver '" + name + "' (expected auto, semianalytic or numeric)");
}

double relative_inf_distance(const StateVector& a, const StateVector& b) {
  double diff = 0.0;
  for (std::size_t i = 0; i < kSpeciesCount; ++i) diff = std::max(diff, std::abs(a[i] - b[i]));
  const double scale = inf_norm(b);
  return scale > 0.0 ? diff / scale : diff;
}

bool meets_residual_contract(const StateVector& x, const ModelParameters& params) {
  const double res = inf_norm(rhs(x, params));
  const double cons = std::abs(receptor_total(x) - params.r_total());
  return res < 1e-10 * std::max(1.0, inf_norm(x)) && cons < 1e-9 * params.r_total();
}

NewtonOutcome newton_polish(const StateVector& x0, const ModelParameters& params, int max_iterations) {
  NewtonOutcome out;
  StateVector x = x0;
  Residual f = newton_residual(x, params);
  double f_norm = f.cwiseAbs().maxCoeff();

  for (int iter = 0; iter < max_iterations && std::isfinite(f_norm); ++iter) {
    out.iterations = iter + 1;
    Jacobian jac = jacobian(x, params);
    for (std::size_t j = 0; j < kSpeciesCount; ++j) {
      jac(0, static_cast<Eigen::Index>(j)) = kReceptorWeights[j];
    }
    Eigen::FullPivLU<Jacobian> lu(jac);
    if (!lu.isInvertible()) break;
    const Residual step = lu.solve(-f);

    double lambda = 1.0;
    bool accepted = false;
    StateVector trial;
    Residual f_trial;
    double trial_norm = 0.0;
    while (lambda >= 1.0 / 1024.0) {
      for (std::size_t i = 0; i < kSpeciesCount; ++i) {
        trial[i] = x[i] + lambda * step(static_cast<Eigen::Index>(i));
      }
      f_trial = newton_residual(trial, params);
      trial_norm = f_trial.cwiseAbs().maxCoeff();
      if (trial_norm < f_norm) {
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) break;  // residual at roundoff level

    const double step_size = lambda * step.cwiseAbs().maxCoeff();
    x = trial;
    f = f_trial;
    f_norm = trial_norm;
    if (step_size <= 4.0 * kEps * std::max(1.0, inf_norm(x))) break;
  }

  out.state = x;
  out.residual_inf_norm = inf_norm(rhs(x, params));
  out.conservation_error = std::abs(receptor_total(x) - params.r_total());
  out.converged = meets_residual_contract(x, params);
  return out;
}

SteadyStateResult solve_steady_semianalytic(const ModelParameters& params) {
  const EliminationCoefficients coeffs = eliminate_dependents(expanded_matrix(params));
  const ConservationScan scan = scan_conservation(coeffs, params);
  if (scan.brackets.empty()) {
    throw ConvergenceError("conservation residual has no sign change on the probe grid", {});
  }

  SteadyStateResult result;
  result.path = SolverPath::semianalytic;
  result.root_count = static_cast<int>(scan.brackets.size());
  bool have_primary = false;
  for (const auto& bracket : scan.brackets) {
    const double r1 = refine_bracket(bracket, coeffs, params);
    const auto branches = assemble_branches(r1, coeffs, params);
    if (bracket.branch >= branches.size()) {
      throw AssemblyError("branch lost at refined root", static_cast<int>(branches.size()));
    }
    const NewtonOutcome polished = newton_polish(branches[bracket.branch], params);
    if (!polished.converged) {
      throw ConvergenceError("Newton polish did not meet the residual contract",
                             to_vector(polished.state));
    }
    if (!have_primary) {
      result.state = polished.state;
      result.r1_root = r1;
      have_primary = true;
    } else {
      result.alternatives.push_back(polished.state);
    }
  }
  result.residual_inf_norm = inf_norm(rhs(result.state, params));
  return result;
}

SteadyStateResult solve_steady_numeric(const ModelParameters& params,
                                       const std::optional<StateVector>& x_init,
                                       const IntegratorConfig& cfg) {
  const StateVector start = x_init.value_or(partitioned_monomers(params));
  const RelaxResult relaxed = relax_to_steady(start, params, cfg);
  const NewtonOutcome polished = newton_polish(relaxed.state, params);
  const double floor = -1e-12 * params.r_total();
  const bool nonnegative = std::all_of(polished.state.begin(), polished.state.end(),
                                       [floor](double v) { return v >= floor; });
  if (!polished.converged || !nonnegative) {
    throw ConvergenceError(
        std::string("numeric steady state failed (relaxation ") +
            (relaxed.converged ? "converged" : "did not converge") + ", Newton residual " +
            std::to_string(polished.residual_inf_norm) + ")",
        to_vector(polished.converged ? polished.state : relaxed.state));
  }
  SteadyStateResult result;
  result.state = polished.state;
  result.residual_inf_norm = polished.residual_inf_norm;
  result.r1_root = polished.state[0];
  result.root_count = 0;
  result.path = SolverPath::numeric;
  return result;
}

SteadyStateResult solve_steady_state(const ModelParameters& params, SolverPreference pref,
                                     const IntegratorConfig& cfg) {
  switch (pref) {
    case SolverPreference::semianalytic:
      return solve_steady_semianalytic(params);
    case SolverPreference::numeric:
      return solve_steady_numeric(params, std::nullopt, cfg);
    case SolverPreference::automatic:
      break;
  }
  if (params.beta() == 0.0) {
    SteadyStateResult r = solve_steady_numeric(params, std::nullopt, cfg);
    r.fallback_reason = "beta = 0 is routed to the numeric path";
    return r;
  }
  std::string reason;
  try {
    return solve_steady_semianalytic(params);
  } catch (const SingularSystem& e) {
    reason = e.what();
  } catch (const AssemblyError& e) {
    reason = e.what();
  } catch (const ConvergenceError& e) {
    reason = e.what();
  }
  SteadyStateResult r = solve_steady_numeric(params, std::nullopt, cfg);
  r.fallback_reason = reason;
  return r;
}

}  // namespace clusterkin
