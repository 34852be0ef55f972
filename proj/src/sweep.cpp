#include "sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <random>

#include <Eigen/LU>
#include <sstream>
#include <thread>

#include "errors.hpp"

namespace clusterkin {
namespace {

constexpr double kTableK1 = 0.0277;
constexpr double kTableK2 = 0.0154;

unsigned resolve_jobs(unsigned jobs, std::size_t work) {
  unsigned n = jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : jobs;
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(work, 1)));
}

// Runs fn(i) for i in [0, n) on a bounded pool. fn must not throw.
template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
  const unsigned workers = resolve_jobs(jobs, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

double parse_number(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InvalidParameter("not a number: '" + text + "'");
  }
  if (used != text.size()) throw InvalidParameter("not a number: '" + text + "'");
  return v;
}

std::string csv_safe(std::string s) {
  for (char& ch : s) {
    if (ch == ',' || ch == '\n' || ch == '\r' || ch == '"') ch = ';';
  }
  return s;
}

void fill_row(SweepRow& row, const SteadyStateResult& result) {
  row.x = result.state;
  const Observables obs = observables(result.state);
  row.signal_hd = obs.signal_hd;
  row.signal_ld = obs.signal_ld;
  row.signal_total = obs.signal_total;
  row.receptors_hd = obs.receptors_hd;
  row.receptors_ld = obs.receptors_ld;
  row.residual_inf_norm = result.residual_inf_norm;
  row.root_count = result.root_count;
  row.path = to_string(result.path);
}

CheckResult check(std::string name, bool passed, std::string detail) {
  return {std::move(name), passed, std::move(detail)};
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace

Scenario Scenario::full() {
  return {"full", RateConstants{}, "tabulated rates with ligand-independent pre-dimerization"};
}

Scenario Scenario::reduced() {
  RateConstants rates;
  rates.a_s = 0.0021;
  rates.b = 0.0001;
  return {"reduced", rates, "on-surface dimerization reduced (a_s = 0.0021, b = 0.0001)"};
}

Scenario Scenario::by_name(std::string_view name) {
  if (name == "full") return full();
  if (name == "reduced") return reduced();
  throw InvalidParameter("unknown scenario '" + std::string(name) + "' (expected full or reduced)");
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {lo};
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  v.back() = hi;
  return v;
}

std::vector<double> logspace(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0 && hi > 0.0)) throw InvalidParameter("log range needs positive bounds");
  std::vector<double> v = linspace(std::log(lo), std::log(hi), n);
  for (double& x : v) x = std::exp(x);
  if (!v.empty()) {
    v.front() = lo;
    v.back() = hi;
  }
  return v;
}

std::vector<double> default_axis_values(SweepAxis axis, std::size_t points) {
  switch (axis) {
    case SweepAxis::alpha: return linspace(1.0, 10.0, points);
    case SweepAxis::f: return linspace(0.05, 0.3, points);
    case SweepAxis::v0: return logspace(0.01, 5.0, points);
    case SweepAxis::beta: return {0.5, 0.25, 0.0};
  }
  return {};
}

std::vector<double> parse_axis_values(std::string_view text) {
  const std::string s = trim(text);
  if (s.empty()) throw InvalidParameter("empty value list");
  if (s.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(trim(part));
    if (parts.size() < 2 || parts.size() > 4) {
      throw InvalidParameter("range must be lo:hi[:n[:log]], got '" + s + "'");
    }
    const double lo = parse_number(parts[0]);
    const double hi = parse_number(parts[1]);
    std::size_t n = 25;
    if (parts.size() >= 3) {
      const double count = parse_number(parts[2]);
      if (!(count >= 1.0) || count != std::floor(count)) {
        throw InvalidParameter("range point count must be a positive integer");
      }
      n = static_cast<std::size_t>(count);
    }
    if (parts.size() == 4) {
      if (parts[3] != "log") throw InvalidParameter("range spacing must be 'log'");
      return logspace(lo, hi, n);
    }
    return linspace(lo, hi, n);
  }
  std::vector<double> values;
  std::stringstream ss(s);
  for (std::string part; std::getline(ss, part, ',');) values.push_back(parse_number(trim(part)));
  return values;
}

void SweepConfig::validate() const {
  if (scenarios.empty()) throw InvalidParameter("no scenario selected");
  if (alpha.empty() || f.empty() || v0.empty() || beta.empty()) {
    throw InvalidParameter("every sweep axis needs at least one value");
  }
  integrator.validate();
  // Constructing each corner validates the whole grid's ranges.
  for (double a : alpha)
    for (double ff : f)
      for (double v : v0)
        for (double b : beta) {
          (void)make_parameters(scenarios.front(), a, ff, v, b, r_total, gamma_out, area_um2);
        }
}

std::size_t SweepConfig::point_count() const {
  return scenarios.size() * beta.size() * alpha.size() * f.size() * v0.size();
}

ModelParameters make_parameters(const Scenario& scenario, double alpha, double f, double v0,
                                double beta, double r_total, double gamma_out, double area_um2) {
  GeometryParameters geometry;
  geometry.alpha = alpha;
  geometry.f = f;
  geometry.beta = beta;
  geometry.gamma_out = gamma_out;
  geometry.area_um2 = area_um2;
  return ModelParameters::create(scenario.rates, geometry, v0, r_total);
}

SweepRow::SweepRow() : verify_max_rel_dev(std::numeric_limits<double>::quiet_NaN()) {
  x.fill(std::numeric_limits<double>::quiet_NaN());
}

SweepRow solve_point(const Scenario& scenario, double alpha, double f, double v0, double beta,
                     const SweepConfig& cfg) {
  SweepRow row;
  row.scenario = scenario.name;
  row.alpha = alpha;
  row.f = f;
  row.v0 = v0;
  row.beta = beta;
  try {
    const ModelParameters params =
        make_parameters(scenario, alpha, f, v0, beta, cfg.r_total, cfg.gamma_out, cfg.area_um2);
    row.k1 = params.k1();
    row.k2 = params.k2();
    const SteadyStateResult result = solve_steady_state(params, cfg.solver, cfg.integrator);
    fill_row(row, result);
    if (cfg.verify) {
      try {
        const SteadyStateResult twin = result.path == SolverPath::semianalytic
                                           ? solve_steady_numeric(params, std::nullopt, cfg.integrator)
                                           : solve_steady_semianalytic(params);
        row.verify_max_rel_dev = relative_inf_distance(twin.state, result.state);
        if (!(row.verify_max_rel_dev <= kVerifyTolerance)) {
          row.error = "paths disagree: relative deviation " + sci(row.verify_max_rel_dev);
        }
      } catch (const std::exception& e) {
        // Only a missing numeric twin is a verification failure; the
        // semianalytic route is allowed to be unavailable.
        if (result.path == SolverPath::semianalytic) {
          row.error = std::string("verification failed: ") + e.what();
        }
      }
    }
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  struct Point {
    const Scenario* scenario;
    double beta, alpha, f, v0;
  };
  std::vector<Point> points;
  points.reserve(cfg.point_count());
  for (const auto& s : cfg.scenarios)
    for (double b : cfg.beta)
      for (double a : cfg.alpha)
        for (double ff : cfg.f)
          for (double v : cfg.v0) points.push_back({&s, b, a, ff, v});

  std::vector<SweepRow> rows(points.size());
  parallel_for(points.size(), cfg.jobs, [&](std::size_t i) {
    const Point& p = points[i];
    rows[i] = solve_point(*p.scenario, p.alpha, p.f, p.v0, p.beta, cfg);
  });
  return rows;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string sweep_csv_header() {
  std::string h = "scenario,alpha,f,V0,beta,k1,k2";
  for (std::size_t i = 0; i < kSpeciesCount; ++i) {
    h += ',';
    h += species_name(i);
  }
  h += ",signal_hd,signal_ld,signal_total,receptors_hd,receptors_ld,residual_inf_norm,root_count,path,"
       "verify_max_rel_dev,error";
  return h;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << sweep_csv_header() << '\n';
  for (const auto& r : rows) {
    out << csv_safe(r.scenario) << ',' << format_double(r.alpha) << ',' << format_double(r.f) << ','
        << format_double(r.v0) << ',' << format_double(r.beta) << ',' << format_double(r.k1) << ','
        << format_double(r.k2);
    for (double v : r.x) out << ',' << format_double(v);
    out << ',' << format_double(r.signal_hd) << ',' << format_double(r.signal_ld) << ','
        << format_double(r.signal_total) << ',' << format_double(r.receptors_hd) << ','
        << format_double(r.receptors_ld) << ',' << format_double(r.residual_inf_norm) << ','
        << r.root_count << ',' << r.path << ',' << format_double(r.verify_max_rel_dev) << ','
        << csv_safe(r.error) << '\n';
  }
}

Trajectory run_timecourse(const ModelParameters& params, const TimecourseSpec& spec) {
  const StateVector x0 = spec.x0.value_or(partitioned_monomers(params));
  return integrate(x0, params, 0.0, spec.t_end, spec.samples, spec.integrator);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  out << 't';
  for (std::size_t i = 0; i < kSpeciesCount; ++i) out << ',' << species_name(i);
  out << ",signal_hd,signal_ld,signal_total,receptors_hd,receptors_ld,receptors_total\n";
  for (const auto& s : trajectory) {
    out << format_double(s.t);
    for (double v : s.x) out << ',' << format_double(v);
    const Observables o = observables(s.x);
    out << ',' << format_double(o.signal_hd) << ',' << format_double(o.signal_ld) << ','
        << format_double(o.signal_total) << ',' << format_double(o.receptors_hd) << ','
        << format_double(o.receptors_ld) << ',' << format_double(o.receptors_total) << '\n';
  }
}

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

ValidationReport validate_model(unsigned jobs) {
  ValidationReport report;
  const ReactionNetwork& net = reaction_network();
  const auto gamma = net.as_matrix();

  {
    int nonzeros = 0;
    bool entries_ok = true;
    for (const auto& row : net.stoichiometry())
      for (int v : row) {
        if (v != 0) ++nonzeros;
        if (v != 0 && v != -1 && v != 1 && v != -2) entries_ok = false;
      }
    report.checks.push_back(check("stoichiometry structure", nonzeros == 44 && entries_ok,
                                  "12x20, " + std::to_string(nonzeros) + " nonzero entries"));
  }
  {
    Eigen::FullPivLU<Eigen::Matrix<double, kSpeciesCount, kFluxCount>> lu(gamma);
    report.checks.push_back(
        check("rank(Gamma) = 11", lu.rank() == 11, "rank " + std::to_string(lu.rank())));
  }
  {
    Eigen::Matrix<double, 1, kSpeciesCount> w;
    for (std::size_t i = 0; i < kSpeciesCount; ++i) w(0, static_cast<Eigen::Index>(i)) = kReceptorWeights[i];
    const double worst = (w * gamma).cwiseAbs().maxCoeff();
    report.checks.push_back(check("receptor weights are a left null vector", worst == 0.0,
                                  "max |w^T Gamma| = " + sci(worst)));
  }

  const Scenario full = Scenario::full();
  const ModelParameters table = make_parameters(full, 5.0, 0.1, 0.1, 0.5);
  {
    const int rank = expanded_matrix(table).rank();
    report.checks.push_back(check("rank(expanded system) = 11", rank == 11, "rank " + std::to_string(rank)));
  }
  {
    const double e1 = std::abs(table.k1() / kTableK1 - 1.0);
    const double e2 = std::abs(table.k2() / kTableK2 - 1.0);
    // The table prints k2 to three figures; its rounding half-unit is 0.00005.
    report.checks.push_back(check("exchange constants match table (f=0.1, alpha=5)",
                                  e1 < 1e-3 && std::abs(table.k2() - kTableK2) <= 0.00005,
                                  "k1 = " + format_double(table.k1()) + " (rel " + sci(e1) +
                                      "), k2 = " + format_double(table.k2()) + " (rel " + sci(e2) + ")"));
  }
  {
    std::mt19937_64 rng(20130517);
    std::uniform_real_distribution<double> log_unif(std::log(1e-6), std::log(1e2));
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      StateVector x;
      for (double& v : x) v = std::exp(log_unif(rng));
      const FluxVector phi = flux_vector(x, table);
      double phi_max = 0.0;
      for (double p : phi) phi_max = std::max(phi_max, std::abs(p));
      worst = std::max(worst, std::abs(receptor_total(rhs(x, table))) / phi_max);
    }
    report.checks.push_back(check("rhs conserves receptors (1000 random states)", worst < 1e-12,
                                  "max |w.rhs| / ||phi|| = " + sci(worst)));
  }

  {
    // Dual-path grid.
    struct Point {
      Scenario scenario;
      double alpha, f, v0, beta;
    };
    std::vector<Point> grid;
    for (const auto& s : {Scenario::full(), Scenario::reduced()})
      for (double b : {0.5, 0.25})
        for (double a : {1.0, 5.0, 10.0})
          for (double ff : {0.05, 0.1, 0.3})
            for (double v : {0.01, 0.1, 5.0}) grid.push_back({s, a, ff, v, b});
    std::vector<double> dev(grid.size(), std::numeric_limits<double>::infinity());
    parallel_for(grid.size(), jobs, [&](std::size_t i) {
      try {
        const auto& p = grid[i];
        const ModelParameters params = make_parameters(p.scenario, p.alpha, p.f, p.v0, p.beta);
        const auto semi = solve_steady_semianalytic(params);
        const auto num = solve_steady_numeric(params);
        dev[i] = relative_inf_distance(semi.state, num.state);
      } catch (const std::exception&) {
      }
    });
    const double worst = *std::max_element(dev.begin(), dev.end());
    report.checks.push_back(check("semianalytic and numeric paths agree (" + std::to_string(grid.size()) +
                                      " points)",
                                  worst <= kVerifyTolerance, "max relative L-inf deviation " + sci(worst)));
  }
  {
    double worst = 0.0;
    bool ok = true;
    for (double ff : {0.05, 0.3})
      for (double v : {0.01, 1.0}) {
        try {
          const auto params = make_parameters(full, 1.0, ff, v, 0.5);
          const auto res = solve_steady_state(params);
          for (std::size_t i = 0; i < kSpeciesCount; i += 2) {
            const double c1 = res.state[i] / ff;
            const double c2 = res.state[i + 1] / (1.0 - ff);
            worst = std::max(worst, std::abs(c1 - c2) / std::max(std::abs(c2), 1e-300));
          }
        } catch (const std::exception&) {
          ok = false;
        }
      }
    report.checks.push_back(check("alpha = 1 gives equal physical concentrations", ok && worst < 1e-8,
                                  "max relative mismatch " + sci(worst)));
  }
  {
    RateConstants rates;
    rates.b = 0.0;
    rates.a_s = 0.0;
    GeometryParameters geometry;
    const auto params = ModelParameters::create(rates, geometry, 0.0, 6.6);
    const double r1 = 6.6 * params.k2() / (params.k1() + params.k2());
    const double r2 = 6.6 * params.k1() / (params.k1() + params.k2());
    double worst = std::numeric_limits<double>::infinity();
    try {
      const auto res = solve_steady_state(params);
      worst = std::max(std::abs(res.state[0] / r1 - 1.0), std::abs(res.state[1] / r2 - 1.0));
    } catch (const std::exception&) {
    }
    report.checks.push_back(check("monomer-only exchange balance", worst < 1e-10,
                                  "max relative error " + sci(worst)));
  }
  {
    double drift = std::numeric_limits<double>::infinity();
    try {
      const Trajectory traj = integrate(partitioned_monomers(table), table, 0.0, 1e5, 101);
      const double w0 = receptor_total(traj.front().x);
      drift = 0.0;
      for (const auto& s : traj) drift = std::max(drift, std::abs(receptor_total(s.x) - w0) / w0);
    } catch (const std::exception&) {
    }
    report.checks.push_back(check("trajectory conserves receptors", drift < 1e-9,
                                  "max relative drift " + sci(drift)));
  }
  return report;
}

std::map<std::string, std::string> parse_config_text(std::string_view text) {
  std::map<std::string, std::string> out;
  std::stringstream ss{std::string(text)};
  int line_no = 0;
  for (std::string line; std::getline(ss, line);) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string content = trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw InvalidParameter("config line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key = trim(content.substr(0, eq));
    for (char& ch : key) ch = ch == '-' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (key.empty()) throw InvalidParameter("config line " + std::to_string(line_no) + ": empty key");
    out[key] = trim(content.substr(eq + 1));
  }
  return out;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace clusterkin
