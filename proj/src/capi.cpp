#include "clusterkin/clusterkin.h"

#include <cstring>
#include <fstream>
#include <iostream>
#include <new>
#include <sstream>
#include <string>

#include "errors.hpp"
#include "sweep.hpp"

namespace ck = clusterkin;

struct ck_params_s {
  ck::RateConstants rates;
  ck::GeometryParameters geometry;
  double v0 = 0.1;
  double r_total = 6.6;
  ck::ModelParameters model;

  ck_params_s(const ck::Scenario& s)
      : rates(s.rates), model(ck::ModelParameters::create(s.rates, ck::GeometryParameters{}, 0.1, 6.6)) {}
};

struct ck_steady_s {
  ck::SteadyStateResult result;
};

struct ck_sweep_s {
  ck::SweepConfig config;
};

struct ck_sweep_result_s {
  std::vector<ck::SweepRow> rows;
};

struct ck_report_s {
  ck::ValidationReport report;
};

namespace {

thread_local std::string g_last_error;

int fail(int status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs fn and maps escaping exceptions to status codes.
template <class Fn>
int guard(const char* where, Fn&& fn) noexcept {
  try {
    g_last_error.clear();
    return fn();
  } catch (const ck::InvalidParameter& e) {
    return fail(CK_ERROR_INVALID_ARGUMENT, std::string(where) + ": " + e.what());
  } catch (const ck::SingularSystem& e) {
    return fail(CK_ERROR_SINGULAR, std::string(where) + ": " + e.what());
  } catch (const ck::AssemblyError& e) {
    return fail(CK_ERROR_NO_CONVERGENCE, std::string(where) + ": " + e.what());
  } catch (const ck::ConvergenceError& e) {
    return fail(CK_ERROR_NO_CONVERGENCE, std::string(where) + ": " + e.what());
  } catch (const ck::IntegrationError& e) {
    return fail(CK_ERROR_INTEGRATION, std::string(where) + ": " + e.what());
  } catch (const std::bad_alloc&) {
    return fail(CK_ERROR_EXCEPTION, std::string(where) + ": out of memory");
  } catch (const std::exception& e) {
    return fail(CK_ERROR_EXCEPTION, std::string(where) + ": " + e.what());
  } catch (...) {
    return fail(CK_ERROR_EXCEPTION, std::string(where) + ": unknown exception");
  }
}

#define CK_REQUIRE(ptr)                                                         \
  do {                                                                          \
    if ((ptr) == nullptr) return fail(CK_ERROR_NULL_POINTER, #ptr " is null"); \
  } while (0)

double* rate_field(ck::RateConstants& r, std::string_view key) {
  if (key == "b") return &r.b;
  if (key == "d") return &r.d;
  if (key == "a") return &r.a;
  if (key == "c") return &r.c;
  if (key == "a_i") return &r.a_i;
  if (key == "c_i") return &r.c_i;
  if (key == "b_i") return &r.b_i;
  if (key == "d_i") return &r.d_i;
  if (key == "a_s") return &r.a_s;
  return nullptr;
}

double* geometry_field(ck::GeometryParameters& g, std::string_view key) {
  if (key == "alpha") return &g.alpha;
  if (key == "f") return &g.f;
  if (key == "beta") return &g.beta;
  if (key == "gamma_out") return &g.gamma_out;
  if (key == "acell_um2") return &g.area_um2;
  if (key == "r_cell_um") return &g.cell_radius_um;
  return nullptr;
}

ck::StateVector to_state(const double* x, std::size_t nx) {
  if (nx != ck::kSpeciesCount) {
    throw ck::InvalidParameter("state must have " + std::to_string(ck::kSpeciesCount) + " entries");
  }
  ck::StateVector s;
  std::copy(x, x + nx, s.begin());
  return s;
}

ck::SolverPreference to_preference(int solver) {
  switch (solver) {
    case CK_SOLVER_AUTO: return ck::SolverPreference::automatic;
    case CK_SOLVER_SEMIANALYTIC: return ck::SolverPreference::semianalytic;
    case CK_SOLVER_NUMERIC: return ck::SolverPreference::numeric;
    default: throw ck::InvalidParameter("unknown solver " + std::to_string(solver));
  }
}

void fill_observables(const ck::Observables& o, ck_observables* out) {
  out->signal_total = o.signal_total;
  out->signal_hd = o.signal_hd;
  out->signal_ld = o.signal_ld;
  out->receptors_hd = o.receptors_hd;
  out->receptors_ld = o.receptors_ld;
  out->receptors_total = o.receptors_total;
}

template <class Writer>
int write_to_path(const char* path, Writer&& write) {
  if (std::strcmp(path, "-") == 0) {
    write(std::cout);
    std::cout.flush();
    return std::cout ? CK_OK : fail(CK_ERROR_IO, "write to stdout failed");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) return fail(CK_ERROR_IO, std::string("cannot open '") + path + "' for writing");
  write(out);
  out.close();
  if (!out) return fail(CK_ERROR_IO, std::string("write to '") + path + "' failed");
  return CK_OK;
}

std::vector<double>* sweep_axis(ck::SweepConfig& cfg, std::string_view axis) {
  if (axis == "alpha") return &cfg.alpha;
  if (axis == "f") return &cfg.f;
  if (axis == "v0") return &cfg.v0;
  if (axis == "beta") return &cfg.beta;
  return nullptr;
}

bool sweep_column(const ck::SweepRow& row, std::string_view column, double& value) {
  if (column == "alpha") value = row.alpha;
  else if (column == "f") value = row.f;
  else if (column == "V0" || column == "v0") value = row.v0;
  else if (column == "beta") value = row.beta;
  else if (column == "k1") value = row.k1;
  else if (column == "k2") value = row.k2;
  else if (column == "signal_hd") value = row.signal_hd;
  else if (column == "signal_ld") value = row.signal_ld;
  else if (column == "signal_total") value = row.signal_total;
  else if (column == "receptors_hd") value = row.receptors_hd;
  else if (column == "receptors_ld") value = row.receptors_ld;
  else if (column == "residual_inf_norm") value = row.residual_inf_norm;
  else if (column == "root_count") value = row.root_count;
  else if (column == "verify_max_rel_dev") value = row.verify_max_rel_dev;
  else {
    for (std::size_t i = 0; i < ck::kSpeciesCount; ++i) {
      if (column == ck::species_name(i)) {
        value = row.x[i];
        return true;
      }
    }
    return false;
  }
  return true;
}

}  // namespace

extern "C" {

const char* ck_version(void) { return "0.1.0"; }

const char* ck_status_string(int status) {
  switch (status) {
    case CK_OK: return "ok";
    case CK_ERROR_NULL_POINTER: return "null pointer";
    case CK_ERROR_INVALID_ARGUMENT: return "invalid argument";
    case CK_ERROR_SINGULAR: return "singular system";
    case CK_ERROR_NO_CONVERGENCE: return "no convergence";
    case CK_ERROR_INTEGRATION: return "integration failure";
    case CK_ERROR_IO: return "i/o error";
    case CK_ERROR_INSUFFICIENT_BUFFER: return "insufficient buffer";
    case CK_ERROR_EXCEPTION: return "internal error";
    default: return "unknown status";
  }
}

const char* ck_last_error_message(void) { return g_last_error.c_str(); }

const char* ck_species_name(size_t index) {
  return index < ck::kSpeciesCount ? ck::species_name(index).data() : nullptr;
}

const char* ck_flux_name(size_t index) {
  return index < ck::kFluxCount ? ck::ReactionNetwork::flux_name(index).data() : nullptr;
}

int ck_params_create(ck_params* out, const char* scenario) {
  return guard("ck_params_create", [&]() -> int {
    CK_REQUIRE(out);
    *out = nullptr;
    const ck::Scenario s = ck::Scenario::by_name(scenario ? scenario : "full");
    *out = new ck_params_s(s);
    return CK_OK;
  });
}

int ck_params_clone(ck_params* out, ck_params src) {
  return guard("ck_params_clone", [&]() -> int {
    CK_REQUIRE(out);
    CK_REQUIRE(src);
    *out = new ck_params_s(*src);
    return CK_OK;
  });
}

int ck_params_destroy(ck_params p) {
  delete p;
  return CK_OK;
}

int ck_params_set(ck_params p, const char* key, double value) {
  return guard("ck_params_set", [&]() -> int {
    CK_REQUIRE(p);
    CK_REQUIRE(key);
    ck::RateConstants rates = p->rates;
    ck::GeometryParameters geometry = p->geometry;
    double v0 = p->v0;
    double r_total = p->r_total;
    const std::string_view k(key);
    if (double* r = rate_field(rates, k)) {
      *r = value;
    } else if (double* g = geometry_field(geometry, k)) {
      *g = value;
    } else if (k == "v0") {
      v0 = value;
    } else if (k == "rtotal") {
      r_total = value;
    } else {
      return fail(CK_ERROR_INVALID_ARGUMENT, std::string("unknown or read-only parameter '") + key + "'");
    }
    p->model = ck::ModelParameters::create(rates, geometry, v0, r_total);
    p->rates = rates;
    p->geometry = geometry;
    p->v0 = v0;
    p->r_total = r_total;
    return CK_OK;
  });
}

int ck_params_get(ck_params p, const char* key, double* value) {
  return guard("ck_params_get", [&]() -> int {
    CK_REQUIRE(p);
    CK_REQUIRE(key);
    CK_REQUIRE(value);
    const std::string_view k(key);
    if (double* r = rate_field(p->rates, k)) *value = *r;
    else if (double* g = geometry_field(p->geometry, k)) *value = *g;
    else if (k == "v0") *value = p->v0;
    else if (k == "rtotal") *value = p->r_total;
    else if (k == "k1") *value = p->model.k1();
    else if (k == "k2") *value = p->model.k2();
    else if (k == "delta") *value = p->model.delta();
    else if (k == "L0") *value = p->model.exchange().boundary_um;
    else return fail(CK_ERROR_INVALID_ARGUMENT, std::string("unknown parameter '") + key + "'");
    return CK_OK;
  });
}

int ck_network_gamma(int* out, size_t len) {
  return guard("ck_network_gamma", [&]() -> int {
    CK_REQUIRE(out);
    if (len < ck::kSpeciesCount * ck::kFluxCount) {
      return fail(CK_ERROR_INSUFFICIENT_BUFFER, "need 240 entries");
    }
    const auto& g = ck::reaction_network().stoichiometry();
    for (std::size_t i = 0; i < ck::kSpeciesCount; ++i)
      for (std::size_t j = 0; j < ck::kFluxCount; ++j) out[i * ck::kFluxCount + j] = g[i][j];
    return CK_OK;
  });
}

int ck_flux_vector(ck_params p, const double* x, size_t nx, double* phi, size_t nphi) {
  return guard("ck_flux_vector", [&]() -> int {
    CK_REQUIRE(p);
    CK_REQUIRE(x);
    CK_REQUIRE(phi);
    if (nphi < ck::kFluxCount) return fail(CK_ERROR_INSUFFICIENT_BUFFER, "need 20 entries");
    const ck::FluxVector v = ck::flux_vector(to_state(x, nx), p->model);
    std::copy(v.begin(), v.end(), phi);
    return CK_OK;
  });
}

int ck_rhs(ck_params p, const double* x, size_t nx, double* dxdt, size_t ndx) {
  return guard("ck_rhs", [&]() -> int {
    CK_REQUIRE(p);
    CK_REQUIRE(x);
    CK_REQUIRE(dxdt);
    if (ndx < ck::kSpeciesCount) return fail(CK_ERROR_INSUFFICIENT_BUFFER, "need 12 entries");
    const ck::StateVector v = ck::rhs(to_state(x, nx), p->model);
    std::copy(v.begin(), v.end(), dxdt);
    return CK_OK;
  });
}

int ck_observables_of(const double* x, size_t nx, ck_observables* out) {
  return guard("ck_observables_of", [&]() -> int {
    CK_REQUIRE(x);
    CK_REQUIRE(out);
    fill_observables(ck::observables(to_state(x, nx)), out);
    return CK_OK;
  });
}

int ck_solve_steady(ck_params p, int solver, ck_steady* out) {
  return guard("ck_solve_steady", [&]() -> int {
    CK_REQUIRE(p);
    CK_REQUIRE(out);
    *out = nullptr;
    auto result = ck::solve_steady_state(p->model, to_preference(solver));
    *out = new ck_steady_s{std::move(result)};
    return CK_OK;
  });
}

int ck_steady_destroy(ck_steady s) {
  delete s;
  return CK_OK;
}

int ck_steady_state(ck_steady s, double* x, size_t nx) {
  return guard("ck_steady_state", [&]() -> int {
    CK_REQUIRE(s);
    CK_REQUIRE(x);
    if (nx < ck::kSpeciesCount) return fail(CK_ERROR_INSUFFICIENT_BUFFER, "need 12 entries");
    std::copy(s->result.state.begin(), s->result.state.end(), x);
    return CK_OK;
  });
}

int ck_steady_observables(ck_steady s, ck_observables* out) {
  return guard("ck_steady_observables", [&]() -> int {
    CK_REQUIRE(s);
    CK_REQUIRE(out);
    fill_observables(ck::observables(s->result.state), out);
    return CK_OK;
  });
}

int ck_steady_residual(ck_steady s, double* residual_inf_norm) {
  return guard("ck_steady_residual", [&]() -> int {
    CK_REQUIRE(s);
    CK_REQUIRE(residual_inf_norm);
    *residual_inf_norm = s->result.residual_inf_norm;
    return CK_OK;
  });
}

int ck_steady_root_count(ck_steady s, int* count) {
  return guard("ck_steady_root_count", [&]() -> int {
    CK_REQUIRE(s);
    CK_REQUIRE(count);
    *count = s->result.root_count;
    return CK_OK;
  });
}

int ck_steady_path(ck_steady s, int* path) {
  return guard("ck_steady_path", [&]() -> int {
    CK_REQUIRE(s);
    CK_REQUIRE(path);
    *path = s->result.path == ck::SolverPath::semianalytic ? CK_PATH_SEMIANALYTIC : CK_PATH_NUMERIC;
    return CK_OK;
  });
}

int ck_steady_fallback_reason(ck_steady s, char* buf, size_t len, size_t* needed) {
  return guard("ck_steady_fallback_reason", [&]() -> int {
    CK_REQUIRE(s);
    const std::string& reason = s->result.fallback_reason;
    if (needed) *needed = reason.size() + 1;
    if (buf == nullptr || len < reason.size() + 1) {
      return fail(CK_ERROR_INSUFFICIENT_BUFFER, "buffer too small for fallback reason");
    }
    std::memcpy(buf, reason.c_str(), reason.size() + 1);
    return CK_OK;
  });
}

int ck_timecourse_write_csv(ck_params p, const double* x0, size_t nx, double t_end, size_t samples,
                            const char* path) {
  return guard("ck_timecourse_write_csv", [&]() -> int {
    CK_REQUIRE(p);
    CK_REQUIRE(path);
    ck::TimecourseSpec spec;
    if (x0) spec.x0 = to_state(x0, nx);
    spec.t_end = t_end;
    spec.samples = samples;
    if (!(t_end > 0.0)) throw ck::InvalidParameter("t_end must be positive");
    if (samples < 2) throw ck::InvalidParameter("need at least 2 samples");
    const ck::Trajectory traj = ck::run_timecourse(p->model, spec);
    return write_to_path(path, [&](std::ostream& os) { ck::write_trajectory_csv(os, traj); });
  });
}

int ck_sweep_create(ck_sweep* out) {
  return guard("ck_sweep_create", [&]() -> int {
    CK_REQUIRE(out);
    *out = new ck_sweep_s{};
    return CK_OK;
  });
}

int ck_sweep_destroy(ck_sweep s) {
  delete s;
  return CK_OK;
}

int ck_sweep_set_axis(ck_sweep s, const char* axis, const double* values, size_t n) {
  return guard("ck_sweep_set_axis", [&]() -> int {
    CK_REQUIRE(s);
    CK_REQUIRE(axis);
    CK_REQUIRE(values);
    std::vector<double>* target = sweep_axis(s->config, axis);
    if (!target) return fail(CK_ERROR_INVALID_ARGUMENT, std::string("unknown axis '") + axis + "'");
    if (n == 0) return fail(CK_ERROR_INVALID_ARGUMENT, "axis needs at least one value");
    target->assign(values, values + n);
    return CK_OK;
  });
}

int ck_sweep_set_axis_text(ck_sweep s, const char* axis, const char* spec) {
  return guard("ck_sweep_set_axis_text", [&]() -> int {
    CK_REQUIRE(s);
    CK_REQUIRE(axis);
    CK_REQUIRE(spec);
    std::vector<double>* target = sweep_axis(s->config, axis);
    if (!target) return fail(CK_ERROR_INVALID_ARGUMENT, std::string("unknown axis '") + axis + "'");
    *target = ck::parse_axis_values(spec);
    return CK_OK;
  });
}

int ck_sweep_set_scenarios(ck_sweep s, const char* names) {
  return guard("ck_sweep_set_scenarios", [&]() -> int {
    CK_REQUIRE(s);
    CK_REQUIRE(names);
    std::vector<ck::Scenario> list;
    std::stringstream ss(names);
    for (std::string name; std::getline(ss, name, ',');) {
      const auto b = name.find_first_not_of(" \t");
      const auto e = name.find_last_not_of(" \t");
      if (b == std::string::npos) continue;
      list.push_back(ck::Scenario::by_name(name.substr(b, e - b + 1)));
    }
    if (list.empty()) return fail(CK_ERROR_INVALID_ARGUMENT, "no scenario named");
    s->config.scenarios = std::move(list);
    return CK_OK;
  });
}

int ck_sweep_set_option(ck_sweep s, const char* key, double value) {
  return guard("ck_sweep_set_option", [&]() -> int {
    CK_REQUIRE(s);
    CK_REQUIRE(key);
    auto& c = s->config;
    const std::string_view k(key);
    if (k == "rtotal") c.r_total = value;
    else if (k == "gamma_out") c.gamma_out = value;
    else if (k == "acell_um2") c.area_um2 = value;
    else if (k == "verify") c.verify = value != 0.0;
    else if (k == "jobs") {
      if (!(value >= 0.0) || value > 4096.0) throw ck::InvalidParameter("jobs must be in [0, 4096]");
      c.jobs = static_cast<unsigned>(value);
    } else if (k == "rel_tol") c.integrator.rel_tol = value;
    else if (k == "abs_tol") c.integrator.abs_tol = value;
    else if (k == "t_max") c.integrator.t_max = value;
    else return fail(CK_ERROR_INVALID_ARGUMENT, std::string("unknown sweep option '") + key + "'");
    return CK_OK;
  });
}

int ck_sweep_set_solver(ck_sweep s, int solver) {
  return guard("ck_sweep_set_solver", [&]() -> int {
    CK_REQUIRE(s);
    s->config.solver = to_preference(solver);
    return CK_OK;
  });
}

int ck_sweep_point_count(ck_sweep s, size_t* count) {
  return guard("ck_sweep_point_count", [&]() -> int {
    CK_REQUIRE(s);
    CK_REQUIRE(count);
    *count = s->config.point_count();
    return CK_OK;
  });
}

int ck_sweep_run(ck_sweep s, ck_sweep_result* out) {
  return guard("ck_sweep_run", [&]() -> int {
    CK_REQUIRE(s);
    CK_REQUIRE(out);
    *out = nullptr;
    auto rows = ck::run_sweep(s->config);
    *out = new ck_sweep_result_s{std::move(rows)};
    return CK_OK;
  });
}

int ck_sweep_result_destroy(ck_sweep_result r) {
  delete r;
  return CK_OK;
}

int ck_sweep_result_rows(ck_sweep_result r, size_t* rows) {
  return guard("ck_sweep_result_rows", [&]() -> int {
    CK_REQUIRE(r);
    CK_REQUIRE(rows);
    *rows = r->rows.size();
    return CK_OK;
  });
}

int ck_sweep_result_failures(ck_sweep_result r, size_t* failures) {
  return guard("ck_sweep_result_failures", [&]() -> int {
    CK_REQUIRE(r);
    CK_REQUIRE(failures);
    *failures = 0;
    for (const auto& row : r->rows) *failures += row.error.empty() ? 0 : 1;
    return CK_OK;
  });
}

int ck_sweep_result_get(ck_sweep_result r, size_t row, const char* column, double* value) {
  return guard("ck_sweep_result_get", [&]() -> int {
    CK_REQUIRE(r);
    CK_REQUIRE(column);
    CK_REQUIRE(value);
    if (row >= r->rows.size()) return fail(CK_ERROR_INVALID_ARGUMENT, "row index out of range");
    if (!sweep_column(r->rows[row], column, *value)) {
      return fail(CK_ERROR_INVALID_ARGUMENT, std::string("no numeric column '") + column + "'");
    }
    return CK_OK;
  });
}

int ck_sweep_result_write_csv(ck_sweep_result r, const char* path) {
  return guard("ck_sweep_result_write_csv", [&]() -> int {
    CK_REQUIRE(r);
    CK_REQUIRE(path);
    return write_to_path(path, [&](std::ostream& os) { ck::write_sweep_csv(os, r->rows); });
  });
}

int ck_validate(unsigned jobs, ck_report* out) {
  return guard("ck_validate", [&]() -> int {
    CK_REQUIRE(out);
    *out = new ck_report_s{ck::validate_model(jobs)};
    return CK_OK;
  });
}

int ck_report_destroy(ck_report r) {
  delete r;
  return CK_OK;
}

int ck_report_count(ck_report r, size_t* count) {
  return guard("ck_report_count", [&]() -> int {
    CK_REQUIRE(r);
    CK_REQUIRE(count);
    *count = r->report.checks.size();
    return CK_OK;
  });
}

int ck_report_check(ck_report r, size_t index, const char** name, int* passed, const char** detail) {
  return guard("ck_report_check", [&]() -> int {
    CK_REQUIRE(r);
    if (index >= r->report.checks.size()) return fail(CK_ERROR_INVALID_ARGUMENT, "check index out of range");
    const auto& c = r->report.checks[index];
    if (name) *name = c.name.c_str();
    if (passed) *passed = c.passed ? 1 : 0;
    if (detail) *detail = c.detail.c_str();
    return CK_OK;
  });
}

}  // extern "C"
