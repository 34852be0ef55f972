// clusterkin: steady states, sweeps, time courses and self-checks for the
// two-domain receptor clustering model.

#include <clusterkin/clusterkin.h>

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace {

enum Exit { kOk = 0, kRowFailures = 1, kUsage = 2, kRuntime = 3 };

struct CliError {
  int code;
  std::string message;
};

void check(int status) {
  if (status == CK_OK) return;
  const int code = (status == CK_ERROR_INVALID_ARGUMENT || status == CK_ERROR_NULL_POINTER) ? kUsage : kRuntime;
  throw CliError{code, std::string(ck_status_string(status)) + ": " + ck_last_error_message()};
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t used = 0;
      const std::string t = trim(item);
      out.push_back(std::stod(t, &used));
      if (used != t.size()) throw std::invalid_argument(t);
    } catch (const std::exception&) {
      throw CliError{kUsage, std::string("bad number in ") + what + ": '" + item + "'"};
    }
  }
  return out;
}

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError{kUsage, "cannot open config file '" + path + "'"};
  std::map<std::string, std::string> kv;
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw CliError{kUsage, path + ":" + std::to_string(line_no) + ": expected key = value"};
    }
    std::string key = trim(line.substr(0, eq));
    for (char& c : key) c = c == '-' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

// Values for flags shared by every model subcommand. Axis values stay as text
// until the subcommand decides how to use them.
struct Common {
  std::string scenario = "full";
  std::string alpha, f, v0, beta;
  std::string rtotal, gamma_out, acell_um2;
  std::string out = "-";
  std::string config;
  std::string solver = "auto";
  bool verify = false;
  unsigned jobs = 0;
};

struct Bound {
  CLI::Option* option;
  std::string* target;
};

int solver_code(const std::string& name) {
  if (name == "auto" || name == "automatic") return CK_SOLVER_AUTO;
  if (name == "semianalytic") return CK_SOLVER_SEMIANALYTIC;
  if (name == "numeric") return CK_SOLVER_NUMERIC;
  throw CliError{kUsage, "unknown solver '" + name + "' (auto, semianalytic, numeric)"};
}

class Sub {
 public:
  Sub(CLI::App& app, const char* name, const char* help, bool axes_as_ranges)
      : cmd_(app.add_subcommand(name, help)) {
    const char* axis_help = axes_as_ranges ? "value list v1,v2,... or range lo:hi[:n[:log]]" : "value";
    bind("--scenario", c.scenario, axes_as_ranges ? "full, reduced or a comma list" : "full or reduced");
    bind("--alpha", c.alpha, axis_help);
    bind("--f", c.f, axis_help);
    bind("--v0", c.v0, axis_help);
    bind("--beta", c.beta, axis_help);
    bind("--rtotal", c.rtotal, "total receptor density, fmol/cm^2 (6.6)");
    bind("--gamma-out", c.gamma_out, "outbound boundary permeability, cm/s (8.23e-6)");
    bind("--acell-um2", c.acell_um2, "membrane area, um^2 (1000)");
    bind("--out", c.out, "output path, - for stdout");
    bind("--solver", c.solver, "auto, semianalytic or numeric");
    cmd_->add_option("--config", c.config, "key = value file; flags take precedence");
    verify_ = cmd_->add_flag("--verify", c.verify, "cross-check against the other solver path");
    jobs_ = cmd_->add_option("--jobs", c.jobs, "worker threads, 0 = all cores");
  }

  CLI::App* cmd() { return cmd_; }

  CLI::Option* bind(const std::string& flag, std::string& target, const std::string& help) {
    CLI::Option* opt = cmd_->add_option(flag, target, help);
    std::string key = flag.substr(2);
    for (char& ch : key) ch = ch == '-' ? '_' : ch;
    bound_[key] = {opt, &target};
    return opt;
  }

  // Fills options the command line left unset from the config file.
  void apply_config() {
    if (c.config.empty()) return;
    for (const auto& [key, value] : read_config(c.config)) {
      if (auto it = bound_.find(key); it != bound_.end()) {
        if (it->second.option->count() == 0) *it->second.target = value;
      } else if (key == "verify") {
        if (verify_->count() == 0) c.verify = value == "1" || value == "true" || value == "yes";
      } else if (key == "jobs") {
        if (jobs_->count() == 0) c.jobs = static_cast<unsigned>(std::stoul(value));
      } else {
        throw CliError{kUsage, "unknown config key '" + key + "'"};
      }
    }
  }

  Common c;

 private:
  CLI::App* cmd_;
  CLI::Option* verify_ = nullptr;
  CLI::Option* jobs_ = nullptr;
  std::map<std::string, Bound> bound_;
};

// Owns a C-API handle for the duration of a scope.
template <class H, int (*Destroy)(H)>
struct Handle {
  H h = nullptr;
  ~Handle() {
    if (h) Destroy(h);
  }
};

void configure_sweep(ck_sweep s, const Common& c, const std::vector<std::string>& default_axes) {
  check(ck_sweep_set_scenarios(s, c.scenario.c_str()));
  // Fixed-point values unless an axis is given or requested by name.
  const std::pair<const char*, const std::string*> axes[] = {
      {"alpha", &c.alpha}, {"f", &c.f}, {"v0", &c.v0}, {"beta", &c.beta}};
  const std::map<std::string, std::string> ranges{
      {"alpha", "1:10:25"}, {"f", "0.05:0.3:25"}, {"v0", "0.01:5:25:log"}, {"beta", "0.5,0.25,0"}};
  for (const auto& name : default_axes) {
    if (!ranges.count(name)) throw CliError{kUsage, "unknown axis '" + name + "' (alpha, f, v0, beta)"};
  }
  for (const auto& [name, text] : axes) {
    if (!text->empty()) {
      check(ck_sweep_set_axis_text(s, name, text->c_str()));
    } else if (std::find(default_axes.begin(), default_axes.end(), name) != default_axes.end()) {
      check(ck_sweep_set_axis_text(s, name, ranges.at(name).c_str()));
    }
  }
  if (!c.rtotal.empty()) check(ck_sweep_set_option(s, "rtotal", parse_list(c.rtotal, "--rtotal").at(0)));
  if (!c.gamma_out.empty()) {
    check(ck_sweep_set_option(s, "gamma_out", parse_list(c.gamma_out, "--gamma-out").at(0)));
  }
  if (!c.acell_um2.empty()) {
    check(ck_sweep_set_option(s, "acell_um2", parse_list(c.acell_um2, "--acell-um2").at(0)));
  }
  check(ck_sweep_set_option(s, "verify", c.verify ? 1.0 : 0.0));
  check(ck_sweep_set_option(s, "jobs", c.jobs));
  check(ck_sweep_set_solver(s, solver_code(c.solver)));
}

int run_grid(const Common& c, const std::vector<std::string>& default_axes, bool single_point) {
  Handle<ck_sweep, ck_sweep_destroy> sweep;
  check(ck_sweep_create(&sweep.h));
  if (single_point && c.beta.empty()) {
    const double beta = 0.5;
    check(ck_sweep_set_axis(sweep.h, "beta", &beta, 1));
  }
  configure_sweep(sweep.h, c, default_axes);
  if (single_point) {
    std::size_t n = 0;
    check(ck_sweep_point_count(sweep.h, &n));
    if (n != 1) throw CliError{kUsage, "steady takes one value per parameter; use sweep for grids"};
  }
  Handle<ck_sweep_result, ck_sweep_result_destroy> result;
  check(ck_sweep_run(sweep.h, &result.h));
  check(ck_sweep_result_write_csv(result.h, c.out.c_str()));
  std::size_t failures = 0, rows = 0;
  check(ck_sweep_result_failures(result.h, &failures));
  check(ck_sweep_result_rows(result.h, &rows));
  if (failures > 0) {
    std::fprintf(stderr, "clusterkin: %zu of %zu points failed (see error column)\n", failures, rows);
    return kRowFailures;
  }
  return kOk;
}

int run_timecourse(const Common& c, double t_end, std::size_t samples, const std::string& x0_text) {
  Handle<ck_params, ck_params_destroy> params;
  check(ck_params_create(&params.h, c.scenario.c_str()));
  const std::pair<const char*, const std::string*> scalars[] = {
      {"alpha", &c.alpha},         {"f", &c.f},
      {"v0", &c.v0},               {"beta", &c.beta},
      {"rtotal", &c.rtotal},       {"gamma_out", &c.gamma_out},
      {"acell_um2", &c.acell_um2}};
  for (const auto& [key, text] : scalars) {
    if (text->empty()) continue;
    const auto v = parse_list(*text, key);
    if (v.size() != 1) throw CliError{kUsage, std::string("timecourse takes a single --") + key};
    check(ck_params_set(params.h, key, v[0]));
  }
  std::vector<double> x0;
  if (!x0_text.empty()) {
    x0 = parse_list(x0_text, "--x0");
    if (x0.size() != CK_SPECIES_COUNT) throw CliError{kUsage, "--x0 needs 12 comma-separated values"};
  }
  check(ck_timecourse_write_csv(params.h, x0.empty() ? nullptr : x0.data(), x0.size(), t_end, samples,
                                c.out.c_str()));
  return kOk;
}

int run_validate(unsigned jobs) {
  Handle<ck_report, ck_report_destroy> report;
  check(ck_validate(jobs, &report.h));
  std::size_t n = 0;
  check(ck_report_count(report.h, &n));
  bool all = true;
  for (std::size_t i = 0; i < n; ++i) {
    const char* name = nullptr;
    const char* detail = nullptr;
    int passed = 0;
    check(ck_report_check(report.h, i, &name, &passed, &detail));
    std::printf("%s  %s: %s\n", passed ? "PASS" : "FAIL", name, detail);
    all = all && passed;
  }
  std::printf("%s\n", all ? "all checks passed" : "some checks FAILED");
  return all ? kOk : kRowFailures;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-domain receptor clustering kinetics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ck_version()));

  Sub steady(app, "steady", "steady state at one parameter point (CSV row)", false);

  Sub sweep(app, "sweep", "steady states over a parameter grid (CSV)", true);
  std::vector<std::string> default_axes;
  sweep.cmd()->add_option("--axis", default_axes,
                          "sweep an axis over its default range (alpha, f, v0, beta); repeatable");

  Sub timecourse(app, "timecourse", "trajectory from an initial state (CSV)", false);
  std::string t_end = "1e5", samples = "101", x0;
  timecourse.bind("--t-end", t_end, "final time, s");
  timecourse.bind("--samples", samples, "number of output rows, both ends included");
  timecourse.bind("--x0", x0, "12 comma-separated initial concentrations");

  auto* validate = app.add_subcommand("validate", "run the model self-checks");
  unsigned validate_jobs = 0;
  validate->add_option("--jobs", validate_jobs, "worker threads, 0 = all cores");

  CLI11_PARSE(app, argc, argv);

  try {
    if (steady.cmd()->parsed()) {
      steady.apply_config();
      return run_grid(steady.c, {}, true);
    }
    if (sweep.cmd()->parsed()) {
      sweep.apply_config();
      if (default_axes.empty() && sweep.c.alpha.empty() && sweep.c.f.empty() && sweep.c.v0.empty() &&
          sweep.c.beta.empty()) {
        std::fprintf(stderr, "clusterkin: no axis given; sweeping beta only\n");
      }
      return run_grid(sweep.c, default_axes, false);
    }
    if (timecourse.cmd()->parsed()) {
      timecourse.apply_config();
      const auto te = parse_list(t_end, "--t-end");
      const auto ns = parse_list(samples, "--samples");
      if (te.size() != 1 || ns.size() != 1 || !(ns[0] >= 2) || ns[0] != static_cast<double>(static_cast<std::size_t>(ns[0]))) {
        throw CliError{kUsage, "--t-end takes one value and --samples an integer >= 2"};
      }
      return run_timecourse(timecourse.c, te[0], static_cast<std::size_t>(ns[0]), x0);
    }
    if (validate->parsed()) return run_validate(validate_jobs);
  } catch (const CliError& e) {
    std::fprintf(stderr, "clusterkin: %s\n", e.message.c_str());
    return e.code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "clusterkin: %s\n", e.what());
    return kRuntime;
  }
  return kUsage;
}
