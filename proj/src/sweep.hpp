#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "integrator.hpp"
#include "model.hpp"
#include "steady_state.hpp"

namespace clusterkin {

/// Named rate-constant set.
struct Scenario {
  std::string name;
  RateConstants rates;
  std::string description;

  /// Tabulated rates, including ligand-independent pre-dimerization.
  static Scenario full();
  /// Full rates with on-surface dimerization cut to a_s = 0.0021, b = 0.0001.
  static Scenario reduced();
  /// Throws InvalidParameter for unknown names.
  static Scenario by_name(std::string_view name);
};

enum class SweepAxis { alpha, f, v0, beta };

/// Default sweep range for an axis: alpha in [1, 10], f in [0.05, 0.3]
/// (linear), V0 in [0.01, 5] nM (log), 25 points each; beta is {0.5, 0.25, 0}.
std::vector<double> default_axis_values(SweepAxis axis, std::size_t points = 25);

std::vector<double> linspace(double lo, double hi, std::size_t n);
std::vector<double> logspace(double lo, double hi, std::size_t n);

/// Parses "v1,v2,..." or a range "lo:hi[:n[:log]]" (n defaults to 25).
std::vector<double> parse_axis_values(std::string_view text);

struct SweepConfig {
  std::vector<Scenario> scenarios{Scenario::full()};
  std::vector<double> alpha{5.0};
  std::vector<double> f{0.1};
  std::vector<double> v0{0.1};
  std::vector<double> beta{0.5, 0.25, 0.0};
  double r_total = 6.6;
  double gamma_out = 8.23e-6;
  double area_um2 = 1000.0;
  SolverPreference solver = SolverPreference::automatic;
  bool verify = false;   ///< cross-check every row against the other path
  unsigned jobs = 0;     ///< 0 = hardware concurrency
  IntegratorConfig integrator{};

  void validate() const;
  std::size_t point_count() const;
};

/// Builds the model parameters for one grid point.
ModelParameters make_parameters(const Scenario& scenario, double alpha, double f, double v0,
                                double beta, double r_total = 6.6, double gamma_out = 8.23e-6,
                                double area_um2 = 1000.0);

/// One output record. Concentration and observable columns are filled from
/// the steady state; `error` is non-empty when the point failed.
struct SweepRow {
  std::string scenario;
  double alpha = 0.0, f = 0.0, v0 = 0.0, beta = 0.0;
  double k1 = 0.0, k2 = 0.0;
  StateVector x{};
  double signal_hd = 0.0, signal_ld = 0.0, signal_total = 0.0;
  double receptors_hd = 0.0, receptors_ld = 0.0;
  double residual_inf_norm = 0.0;
  int root_count = 0;
  std::string path;
  /// Relative L-inf deviation from the other solver path (verify mode);
  /// NaN when not computed.
  double verify_max_rel_dev;
  std::string error;

  SweepRow();
};

/// Solves one grid point; never throws for solver failures.
SweepRow solve_point(const Scenario& scenario, double alpha, double f, double v0, double beta,
                     const SweepConfig& cfg);

/// Cartesian grid in (scenario, beta, alpha, f, V0) order, evaluated by a
/// bounded worker pool. Output order does not depend on scheduling.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg);

/// Tolerance for verify-mode agreement between the two paths.
inline constexpr double kVerifyTolerance = 1e-8;

/// "%.17g"; NaN prints as "nan".
std::string format_double(double v);

std::string sweep_csv_header();
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

struct TimecourseSpec {
  std::optional<StateVector> x0;  ///< default: partitioned monomers
  double t_end = 1e5;
  std::size_t samples = 101;
  IntegratorConfig integrator{};
};

Trajectory run_timecourse(const ModelParameters& params, const TimecourseSpec& spec);

/// Header t, the 12 species, signal_hd, signal_ld, signal_total,
/// receptors_hd, receptors_ld, receptors_total.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
};

/// Structural, table, dual-path, symmetry and conservation checks.
ValidationReport validate_model(unsigned jobs = 0);

/// Parses "key = value" lines; '#' starts a comment. Keys are lower-cased,
/// dashes become underscores.
std::map<std::string, std::string> parse_config_text(std::string_view text);
std::map<std::string, std::string> read_config_file(const std::string& path);

}  // namespace clusterkin
