#include <doctest.h>

#include <cmath>
#include <sstream>

#include "errors.hpp"
#include "support.hpp"
#include "sweep.hpp"

using namespace clusterkin;
using clusterkin::test::rel_err;

namespace {

std::string csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  write_sweep_csv(os, rows);
  return os.str();
}

}  // namespace

TEST_CASE("scenarios") {
  const Scenario full = Scenario::full();
  CHECK(full.rates.b == 0.1);
  CHECK(full.rates.a_s == 0.21);
  CHECK(full.rates.b_i == 0.446);
  const Scenario reduced = Scenario::reduced();
  CHECK(reduced.rates.a_s == 0.0021);
  CHECK(reduced.rates.b == 0.0001);
  CHECK(reduced.rates.a_i == full.rates.a_i);
  CHECK(Scenario::by_name("reduced").name == "reduced");
  CHECK_THROWS_AS(Scenario::by_name("fast"), InvalidParameter);
}

TEST_CASE("default axes") {
  const auto a = default_axis_values(SweepAxis::alpha);
  REQUIRE(a.size() == 25);
  CHECK(a.front() == 1.0);
  CHECK(a.back() == 10.0);
  const auto v = default_axis_values(SweepAxis::v0);
  CHECK(v.front() == 0.01);
  CHECK(v.back() == 5.0);
  CHECK(v[12] == doctest::Approx(std::sqrt(0.01 * 5.0)));
  CHECK(default_axis_values(SweepAxis::beta) == std::vector<double>{0.5, 0.25, 0.0});
  const auto f = default_axis_values(SweepAxis::f);
  CHECK(f.front() == 0.05);
  CHECK(f.back() == 0.3);
}

TEST_CASE("axis text") {
  CHECK(parse_axis_values("1, 2,5") == std::vector<double>{1, 2, 5});
  CHECK(parse_axis_values("0.5") == std::vector<double>{0.5});
  const auto r = parse_axis_values("1:10:4");
  CHECK(r == std::vector<double>{1, 4, 7, 10});
  CHECK(parse_axis_values("1:10").size() == 25);
  const auto l = parse_axis_values("0.01:1:3:log");
  CHECK(l[1] == doctest::Approx(0.1));
  CHECK_THROWS_AS(parse_axis_values(""), InvalidParameter);
  CHECK_THROWS_AS(parse_axis_values("1,x"), InvalidParameter);
  CHECK_THROWS_AS(parse_axis_values("1:2:0"), InvalidParameter);
  CHECK_THROWS_AS(parse_axis_values("1:2:3:cubic"), InvalidParameter);
  CHECK_THROWS_AS(parse_axis_values("0:1:3:log"), InvalidParameter);
}

TEST_CASE("header follows the row fields") {
  CHECK(sweep_csv_header() ==
        "scenario,alpha,f,V0,beta,k1,k2,R1,R2,RR1,RR2,VR1,VR2,VRR1,VRR2,RVR1,RVR2,D1,D2,signal_hd,signal_ld,"
        "signal_total,receptors_hd,receptors_ld,residual_inf_norm,root_count,path,verify_max_rel_dev,error");
}

TEST_CASE("number formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(5.0) == "5");
  CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("single point conserves receptors") {
  SweepConfig cfg;
  cfg.beta = {0.5};
  const auto rows = run_sweep(cfg);
  REQUIRE(rows.size() == 1);
  const auto& r = rows[0];
  CHECK(r.error.empty());
  CHECK(r.path == "semianalytic");
  CHECK(std::abs(r.receptors_hd + r.receptors_ld - 6.6) < 1e-8);
  CHECK(std::isnan(r.verify_max_rel_dev));
  // Observable columns recompute exactly from the concentrations.
  const Observables o = observables(r.x);
  CHECK(o.signal_hd == r.signal_hd);
  CHECK(o.signal_total == r.signal_total);
  CHECK(o.receptors_hd == r.receptors_hd);
  CHECK(r.k1 == doctest::Approx(0.0276774466).epsilon(1e-9));
}

TEST_CASE("rows follow scenario, beta, alpha, f, V0 order") {
  SweepConfig cfg;
  cfg.scenarios = {Scenario::reduced(), Scenario::full()};
  cfg.beta = {0.5, 0.25};
  cfg.alpha = {2.0, 1.0};
  cfg.f = {0.1, 0.2};
  cfg.v0 = {0.1, 1.0};
  CHECK(cfg.point_count() == 32);
  const auto rows = run_sweep(cfg);
  REQUIRE(rows.size() == 32);
  std::size_t i = 0;
  for (const char* s : {"reduced", "full"})
    for (double b : cfg.beta)
      for (double a : cfg.alpha)
        for (double f : cfg.f)
          for (double v : cfg.v0) {
            const auto& r = rows[i++];
            CHECK(r.scenario == s);
            CHECK(r.beta == b);
            CHECK(r.alpha == a);
            CHECK(r.f == f);
            CHECK(r.v0 == v);
          }
}

TEST_CASE("output does not depend on the worker count") {
  SweepConfig cfg;
  cfg.alpha = {1.0, 3.0, 10.0};
  cfg.v0 = {0.01, 1.0};
  cfg.beta = {0.5, 0.25};
  cfg.jobs = 1;
  const std::string one = csv(run_sweep(cfg));
  cfg.jobs = 4;
  const std::string four = csv(run_sweep(cfg));
  CHECK(one == four);
  CHECK(one.find('\r') == std::string::npos);
}

TEST_CASE("receptors accumulate in the HD domain as alpha grows at beta = 0") {
  SweepConfig cfg;
  cfg.alpha = {1, 2, 5, 10};
  cfg.beta = {0.0};
  const auto rows = run_sweep(cfg);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].error.empty());
    CHECK(rows[i].path == "numeric");
    CHECK(rows[i].receptors_hd > rows[i - 1].receptors_hd);
  }
}

TEST_CASE("the HD domain acts as a sink as V0 grows in the reduced scenario") {
  SweepConfig cfg;
  cfg.scenarios = {Scenario::reduced()};
  cfg.v0 = {0.01, 0.1, 1, 5};
  cfg.beta = {0.0};
  const auto rows = run_sweep(cfg);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].receptors_hd > rows[i - 1].receptors_hd);
}

TEST_CASE("beta = 0.25 lies between the extremes") {
  SweepConfig cfg;
  cfg.scenarios = {Scenario::reduced()};
  cfg.v0 = {0.01, 1.0, 5.0};
  cfg.beta = {0.5, 0.25, 0.0};
  const auto rows = run_sweep(cfg);
  for (std::size_t k = 0; k < 3; ++k) {
    const double hi = rows[k].receptors_hd, mid = rows[3 + k].receptors_hd, lo = rows[6 + k].receptors_hd;
    CHECK(std::min(hi, lo) <= mid);
    CHECK(mid <= std::max(hi, lo));
  }
}

TEST_CASE("verify mode records the twin deviation") {
  SweepConfig cfg;
  cfg.beta = {0.5, 0.0};
  cfg.verify = true;
  const auto rows = run_sweep(cfg);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(r.error.empty());
    CHECK(r.verify_max_rel_dev <= kVerifyTolerance);
  }
}

TEST_CASE("failures stay in their row") {
  RateConstants rates;
  rates.b = 0.0;
  rates.a_s = 0.0;
  SweepConfig cfg;
  cfg.scenarios = {Scenario{"monomer", rates, "no dimerization"}, Scenario::full()};
  cfg.beta = {0.5};
  cfg.solver = SolverPreference::semianalytic;
  const auto rows = run_sweep(cfg);
  REQUIRE(rows.size() == 2);
  CHECK(!rows[0].error.empty());
  CHECK(rows[1].error.empty());
  const std::string text = csv(rows);
  // One header plus two rows, each with the same number of fields.
  std::istringstream in(text);
  int lines = 0;
  for (std::string line; std::getline(in, line); ++lines) {
    CHECK(std::count(line.begin(), line.end(), ',') == 28);
  }
  CHECK(lines == 3);
}

TEST_CASE("invalid grids are rejected up front") {
  SweepConfig cfg;
  cfg.f = {0.1, 0.7};
  CHECK_THROWS_AS(run_sweep(cfg), InvalidParameter);
  cfg = {};
  cfg.alpha.clear();
  CHECK_THROWS_AS(cfg.validate(), InvalidParameter);
}

TEST_CASE("time course ends at the steady state") {
  const auto p = make_parameters(Scenario::full(), 5, 0.1, 0.1, 0.5);
  TimecourseSpec spec;
  const Trajectory traj = run_timecourse(p, spec);
  REQUIRE(traj.size() == 101);
  CHECK(traj.back().t == 1e5);
  CHECK(relative_inf_distance(traj.back().x, test::kOracleFullTable) < 1e-6);
  for (const auto& s : traj) CHECK(rel_err(receptor_total(s.x), 6.6) < 1e-9);

  std::ostringstream os;
  write_trajectory_csv(os, traj);
  std::istringstream in(os.str());
  std::string header;
  std::getline(in, header);
  CHECK(header ==
        "t,R1,R2,RR1,RR2,VR1,VR2,VRR1,VRR2,RVR1,RVR2,D1,D2,signal_hd,signal_ld,signal_total,receptors_hd,"
        "receptors_ld,receptors_total");
}

TEST_CASE("time course from zero") {
  const auto p = make_parameters(Scenario::full(), 5, 0.1, 0.1, 0.5);
  TimecourseSpec spec;
  spec.x0 = StateVector{};
  spec.samples = 5;
  for (const auto& s : run_timecourse(p, spec))
    for (double v : s.x) CHECK(v == 0.0);
}

TEST_CASE("config text") {
  const auto kv = parse_config_text("# sweep\nAlpha = 1,2 \n\nv0=0.1 # nM\ngamma-out = 8e-6\n");
  CHECK(kv.size() == 3);
  CHECK(kv.at("alpha") == "1,2");
  CHECK(kv.at("v0") == "0.1");
  CHECK(kv.at("gamma_out") == "8e-6");
  CHECK_THROWS_AS(parse_config_text("alpha 5\n"), InvalidParameter);
  CHECK_THROWS_AS(read_config_file("/nonexistent/cfg"), InvalidParameter);
}

TEST_CASE("self-check report") {
  const ValidationReport report = validate_model(0);
  CHECK(report.checks.size() >= 8);
  for (const auto& c : report.checks) {
    INFO(c.name << ": " << c.detail);
    CHECK(c.passed);
  }
  CHECK(report.all_passed());
}
