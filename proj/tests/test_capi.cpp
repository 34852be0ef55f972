// Exercises the shared library through its public header only.
#include <doctest.h>

#include <clusterkin/clusterkin.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Params {
  ck_params h = nullptr;
  explicit Params(const char* scenario = nullptr) { REQUIRE(ck_params_create(&h, scenario) == CK_OK); }
  ~Params() { ck_params_destroy(h); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("status strings and names") {
  CHECK(std::string(ck_status_string(CK_OK)) == "ok");
  CHECK(std::string(ck_status_string(CK_ERROR_SINGULAR)) == "singular system");
  CHECK(std::string(ck_status_string(12345)) == "unknown status");
  CHECK(std::string(ck_species_name(0)) == "R1");
  CHECK(std::string(ck_species_name(11)) == "D2");
  CHECK(ck_species_name(12) == nullptr);
  CHECK(std::string(ck_flux_name(14)) == "phi1");
  CHECK(std::string(ck_version()) == "0.1.0");
}

TEST_CASE("null handles are rejected") {
  double v = 0;
  CHECK(ck_params_get(nullptr, "alpha", &v) == CK_ERROR_NULL_POINTER);
  CHECK(std::string(ck_last_error_message()).find("null") != std::string::npos);
  CHECK(ck_params_create(nullptr, "full") == CK_ERROR_NULL_POINTER);
  CHECK(ck_solve_steady(nullptr, CK_SOLVER_AUTO, nullptr) == CK_ERROR_NULL_POINTER);
  CHECK(ck_params_destroy(nullptr) == CK_OK);
}

TEST_CASE("parameters") {
  Params p;
  double v = 0;
  REQUIRE(ck_params_get(p.h, "k1", &v) == CK_OK);
  CHECK(std::abs(v / 0.0277 - 1) < 1e-3);
  REQUIRE(ck_params_get(p.h, "delta", &v) == CK_OK);
  CHECK(v == doctest::Approx(361.3).epsilon(1e-3));
  REQUIRE(ck_params_get(p.h, "L0", &v) == CK_OK);
  CHECK(v == doctest::Approx(33.63).epsilon(1e-3));

  CHECK(ck_params_set(p.h, "alpha", 2.0) == CK_OK);
  double k1 = 0, k2 = 0;
  ck_params_get(p.h, "k1", &k1);
  ck_params_get(p.h, "k2", &k2);
  CHECK(k1 / k2 == doctest::Approx(0.9 / (2.0 * 0.1)));

  SUBCASE("a rejected value leaves the handle unchanged") {
    CHECK(ck_params_set(p.h, "f", 0.9) == CK_ERROR_INVALID_ARGUMENT);
    CHECK(std::string(ck_last_error_message()).find("ck_params_set") == 0);
    ck_params_get(p.h, "f", &v);
    CHECK(v == 0.1);
  }
  SUBCASE("derived values are read-only") {
    CHECK(ck_params_set(p.h, "k1", 1.0) == CK_ERROR_INVALID_ARGUMENT);
    CHECK(ck_params_set(p.h, "nonsense", 1.0) == CK_ERROR_INVALID_ARGUMENT);
  }
  SUBCASE("scenarios") {
    Params r("reduced");
    ck_params_get(r.h, "a_s", &v);
    CHECK(v == 0.0021);
    ck_params p2 = nullptr;
    CHECK(ck_params_create(&p2, "bogus") == CK_ERROR_INVALID_ARGUMENT);
    CHECK(p2 == nullptr);
  }
  SUBCASE("clone is independent") {
    ck_params c = nullptr;
    REQUIRE(ck_params_clone(&c, p.h) == CK_OK);
    ck_params_set(c, "alpha", 7.0);
    ck_params_get(p.h, "alpha", &v);
    CHECK(v == 2.0);
    ck_params_destroy(c);
  }
}

TEST_CASE("network and fluxes") {
  std::vector<int> g(240);
  REQUIRE(ck_network_gamma(g.data(), g.size()) == CK_OK);
  CHECK(g[0] == -2);
  CHECK(g[14] == -1);
  CHECK(g[1 * 20 + 14] == 1);
  CHECK(ck_network_gamma(g.data(), 100) == CK_ERROR_INSUFFICIENT_BUFFER);

  Params p;
  double x[12] = {1.0};
  double phi[20], dx[12];
  REQUIRE(ck_flux_vector(p.h, x, 12, phi, 20) == CK_OK);
  CHECK(phi[0] == doctest::Approx(2.0));
  REQUIRE(ck_rhs(p.h, x, 12, dx, 12) == CK_OK);
  CHECK(dx[2] == doctest::Approx(2.0));
  CHECK(ck_rhs(p.h, x, 11, dx, 12) == CK_ERROR_INVALID_ARGUMENT);
  ck_observables o;
  REQUIRE(ck_observables_of(x, 12, &o) == CK_OK);
  CHECK(o.receptors_total == 1.0);
}

TEST_CASE("steady state") {
  Params p;
  ck_steady s = nullptr;
  REQUIRE(ck_solve_steady(p.h, CK_SOLVER_AUTO, &s) == CK_OK);
  double x[12];
  REQUIRE(ck_steady_state(s, x, 12) == CK_OK);
  CHECK(x[0] == doctest::Approx(0.06465081700782721).epsilon(1e-9));
  int path = -1, roots = -1;
  ck_steady_path(s, &path);
  ck_steady_root_count(s, &roots);
  CHECK(path == CK_PATH_SEMIANALYTIC);
  CHECK(roots == 1);
  double res = 1;
  ck_steady_residual(s, &res);
  CHECK(res < 1e-12);
  ck_observables o;
  ck_steady_observables(s, &o);
  CHECK(o.receptors_total == doctest::Approx(6.6).epsilon(1e-12));
  size_t needed = 0;
  CHECK(ck_steady_fallback_reason(s, nullptr, 0, &needed) == CK_ERROR_INSUFFICIENT_BUFFER);
  CHECK(needed == 1);
  ck_steady_destroy(s);

  ck_params_set(p.h, "beta", 0.0);
  REQUIRE(ck_solve_steady(p.h, CK_SOLVER_AUTO, &s) == CK_OK);
  ck_steady_path(s, &path);
  CHECK(path == CK_PATH_NUMERIC);
  char buf[128];
  REQUIRE(ck_steady_fallback_reason(s, buf, sizeof buf, &needed) == CK_OK);
  CHECK(std::string(buf).find("beta = 0") != std::string::npos);
  ck_steady_destroy(s);

  CHECK(ck_solve_steady(p.h, 9, &s) == CK_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("singular reduction reports its status") {
  Params p;
  ck_params_set(p.h, "b", 0.0);
  ck_params_set(p.h, "a_s", 0.0);
  ck_steady s = nullptr;
  CHECK(ck_solve_steady(p.h, CK_SOLVER_SEMIANALYTIC, &s) == CK_ERROR_SINGULAR);
  CHECK(s == nullptr);
  REQUIRE(ck_solve_steady(p.h, CK_SOLVER_AUTO, &s) == CK_OK);
  ck_steady_destroy(s);
}

TEST_CASE("sweep through handles") {
  ck_sweep sw = nullptr;
  REQUIRE(ck_sweep_create(&sw) == CK_OK);
  const double beta[] = {0.5};
  REQUIRE(ck_sweep_set_axis(sw, "beta", beta, 1) == CK_OK);
  REQUIRE(ck_sweep_set_axis_text(sw, "alpha", "1,5") == CK_OK);
  REQUIRE(ck_sweep_set_scenarios(sw, "full, reduced") == CK_OK);
  CHECK(ck_sweep_set_axis_text(sw, "gamma", "1") == CK_ERROR_INVALID_ARGUMENT);
  CHECK(ck_sweep_set_option(sw, "speed", 1) == CK_ERROR_INVALID_ARGUMENT);
  REQUIRE(ck_sweep_set_option(sw, "jobs", 2) == CK_OK);
  size_t n = 0;
  ck_sweep_point_count(sw, &n);
  CHECK(n == 4);

  ck_sweep_result res = nullptr;
  REQUIRE(ck_sweep_run(sw, &res) == CK_OK);
  size_t rows = 0, failures = 9;
  ck_sweep_result_rows(res, &rows);
  ck_sweep_result_failures(res, &failures);
  CHECK(rows == 4);
  CHECK(failures == 0);
  double v = 0;
  REQUIRE(ck_sweep_result_get(res, 1, "alpha", &v) == CK_OK);
  CHECK(v == 5.0);
  REQUIRE(ck_sweep_result_get(res, 0, "R1", &v) == CK_OK);
  CHECK(v > 0);
  CHECK(ck_sweep_result_get(res, 0, "path", &v) == CK_ERROR_INVALID_ARGUMENT);
  CHECK(ck_sweep_result_get(res, 4, "R1", &v) == CK_ERROR_INVALID_ARGUMENT);

  const std::string path = "capi_sweep.csv";
  REQUIRE(ck_sweep_result_write_csv(res, path.c_str()) == CK_OK);
  const std::string text = slurp(path);
  CHECK(text.rfind("scenario,alpha,f,V0,beta,", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 5);
  std::remove(path.c_str());
  CHECK(ck_sweep_result_write_csv(res, "/nonexistent-dir/x.csv") == CK_ERROR_IO);

  ck_sweep_result_destroy(res);
  ck_sweep_destroy(sw);
}

TEST_CASE("time course file") {
  Params p;
  const std::string path = "capi_timecourse.csv";
  REQUIRE(ck_timecourse_write_csv(p.h, nullptr, 0, 100.0, 3, path.c_str()) == CK_OK);
  const std::string text = slurp(path);
  CHECK(text.rfind("t,R1,", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
  std::remove(path.c_str());
  const double bad[12] = {-1.0};
  CHECK(ck_timecourse_write_csv(p.h, bad, 12, 100.0, 3, path.c_str()) == CK_ERROR_INVALID_ARGUMENT);
  CHECK(ck_timecourse_write_csv(p.h, nullptr, 0, 100.0, 1, path.c_str()) == CK_ERROR_INVALID_ARGUMENT);
}
