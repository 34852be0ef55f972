#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "integrator.hpp"
#include "model.hpp"

namespace clusterkin {

// Semianalytic steady states.
//
// Every flux is linear in the 16-entry expanded vector
//   (x_0 .. x_11, X1 = [R1]^2, X2 = [R2]^2, Y1 = [R1][VR1], Y2 = [R2][VR2]),
// so rhs(x) = Abar * e(x) with Abar = Gamma * A_E (12 x 16, rank 11). Dropping
// the [R1] row and solving the remaining 11 equations for the dependent set
// leaves every species as a function of [R1] once [R2] is fixed by a cubic.
// Receptor conservation is then a scalar equation in [R1].

inline constexpr std::size_t kExpandedCount = 16;
inline constexpr std::size_t kX1 = 12, kX2 = 13, kY1 = 14, kY2 = 15;

/// Expanded columns solved for: RR1, RR2, VR1, VR2, VRR1, VRR2, RVR1, RVR2,
/// D1, D2, Y2.
inline constexpr std::array<std::size_t, 11> kDependentColumns{2, 3, 4, 5, 6, 7, 8, 9, 10, 11, kY2};
/// Expanded columns kept free: R1, R2, X1, X2, Y1.
inline constexpr std::array<std::size_t, 5> kFreeColumns{0, 1, kX1, kX2, kY1};

using ExpandedVector = Eigen::Matrix<double, kExpandedCount, 1>;

struct ExpandedSystem {
  Eigen::Matrix<double, kFluxCount, kExpandedCount> flux_map;   ///< A_E
  Eigen::Matrix<double, kSpeciesCount, kExpandedCount> matrix;  ///< Gamma * A_E

  int rank() const;
};

ExpandedSystem expanded_matrix(const ModelParameters& params);

ExpandedVector expanded_vector(const StateVector& x);

/// y = a * (R1, R2, X1, X2, Y1) for the 11 dependent entries, rows in
/// kDependentColumns order.
struct EliminationCoefficients {
  Eigen::Matrix<double, 11, 5> a;
  double pivot_ratio = 0.0;  ///< smallest / largest LU pivot magnitude

  Eigen::Matrix<double, 11, 1> apply(double r1, double r2, double x1, double x2, double y1) const;
};

/// Solves the 11 retained equations for the dependent set. Throws
/// SingularSystem when the dependent block is rank deficient.
EliminationCoefficients eliminate_dependents(const ExpandedSystem& sys);

/// Every admissible state consistent with the reduction at the given [R1]:
/// one per positive real root of the [R2] cubic whose back-substituted
/// species are all nonnegative. Sorted by [R2]. Throws AssemblyError when
/// the [VR1] denominator 1 - a35*r1 vanishes.
std::vector<StateVector> assemble_branches(double r1, const EliminationCoefficients& coeffs,
                                           const ModelParameters& params);

/// The unique admissible branch; throws AssemblyError (with the count) when
/// there is none or more than one.
StateVector assemble_state(double r1, const EliminationCoefficients& coeffs,
                           const ModelParameters& params);

/// w . assemble_state(r1) - R_total.
double conservation_residual(double r1, const EliminationCoefficients& coeffs,
                             const ModelParameters& params);

struct ConservationBracket {
  std::size_t branch;  ///< index into assemble_branches
  double lo, hi;
  double g_lo, g_hi;
};

struct ConservationScan {
  std::vector<double> probes;
  /// residual per probe and branch; empty where the probe is inadmissible
  std::vector<std::vector<double>> residuals;
  std::vector<ConservationBracket> brackets;
  std::size_t multi_branch_probes = 0;
  std::size_t failed_probes = 0;
};

/// Sign scan of the conservation residual on `probe_count` log-spaced points
/// over [1e-9 R_total, R_total], tracked per cubic branch.
ConservationScan scan_conservation(const EliminationCoefficients& coeffs,
                                   const ModelParameters& params, std::size_t probe_count = 64);

enum class SolverPath { semianalytic, numeric };
enum class SolverPreference { automatic, semianalytic, numeric };

const char* to_string(SolverPath path);
const char* to_string(SolverPreference pref);
SolverPreference parse_solver_preference(const std::string& name);

struct SteadyStateResult {
  StateVector state{};
  double residual_inf_norm = 0.0;
  double r1_root = 0.0;
  int root_count = 0;  ///< conservation roots found; 0 on the numeric path
  SolverPath path = SolverPath::semianalytic;
  /// Further steady states when the conservation scan found several roots.
  std::vector<StateVector> alternatives;
  /// Why automatic mode left the semianalytic path, if it did.
  std::string fallback_reason;
};

/// Steady state by the route selected in `pref`.
///   automatic: beta == 0 goes straight to the numeric path; otherwise the
///              semianalytic path runs and falls back to the numeric path on
///              singular elimination, a failed assembly or a missing bracket.
///   semianalytic / numeric: that path only; failures throw.
SteadyStateResult solve_steady_state(const ModelParameters& params,
                                     SolverPreference pref = SolverPreference::automatic,
                                     const IntegratorConfig& cfg = {});

/// Reduction, conservation root, then Newton polish. Throws SingularSystem,
/// AssemblyError or ConvergenceError.
SteadyStateResult solve_steady_semianalytic(const ModelParameters& params);

/// relax_to_steady from x_init (default: partitioned monomers), then damped
/// Newton. Throws ConvergenceError with the best state on failure.
SteadyStateResult solve_steady_numeric(const ModelParameters& params,
                                       const std::optional<StateVector>& x_init = std::nullopt,
                                       const IntegratorConfig& cfg = {});

struct NewtonOutcome {
  StateVector state{};
  double residual_inf_norm = 0.0;
  double conservation_error = 0.0;  ///< |w.x - R_total|
  int iterations = 0;
  bool converged = false;
};

/// Damped Newton on the 11 independent steady-state equations plus receptor
/// conservation, halving the step until the residual decreases.
NewtonOutcome newton_polish(const StateVector& x0, const ModelParameters& params, int max_iterations = 60);

/// ||rhs(x)||_inf < 1e-10 max(1, ||x||_inf) and |w.x - R_total| < 1e-9 R_total.
bool meets_residual_contract(const StateVector& x, const ModelParameters& params);

/// ||a - b||_inf / ||b||_inf (absolute when b = 0).
double relative_inf_distance(const StateVector& a, const StateVector& b);

}  // namespace clusterkin
