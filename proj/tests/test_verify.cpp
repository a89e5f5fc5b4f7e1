#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "outlift/verify.hpp"

#include "json.hpp"
#include "outlift/curve.hpp"
#include "outlift/smooth.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

using namespace outlift;

namespace {

RunConfig small_config() {
  RunConfig cfg;
  cfg.rank = 2;
  cfg.loop_samples = 64;
  cfg.path_grid = 64;
  cfg.fd_points = 60;
  cfg.equiv_points = 60;
  cfg.cocycle_points = 25;
  return cfg;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

std::vector<std::string> fields_of(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  for (std::string f; std::getline(is, f, ',');) out.push_back(f);
  return out;
}

double num(const std::string& f) { return std::strtod(f.c_str(), nullptr); }

}  // namespace

TEST_CASE("config validation") {
  CHECK_NOTHROW(RunConfig{}.validate());
  CHECK_NOTHROW(small_config().validate());

  auto expect_bad = [](auto mutate) {
    RunConfig cfg;
    mutate(cfg);
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  };
  expect_bad([](RunConfig& c) { c.rank = 1; });
  expect_bad([](RunConfig& c) { c.rank = 9; });
  expect_bad([](RunConfig& c) { c.loop_samples = 500; });  // not a power of two
  expect_bad([](RunConfig& c) { c.loop_samples = 4; });
  expect_bad([](RunConfig& c) { c.path_grid = 96; });
  expect_bad([](RunConfig& c) { c.refine_budget = -1; });
  expect_bad([](RunConfig& c) { c.refine_budget = 49; });
  expect_bad([](RunConfig& c) { c.fd_points = 0; });
  expect_bad([](RunConfig& c) { c.equiv_points = 0; });
  expect_bad([](RunConfig& c) { c.cocycle_points = 0; });
  expect_bad([](RunConfig& c) { c.tol_fd = 0.0; });
  expect_bad([](RunConfig& c) { c.fd_step = 0.0; });
  expect_bad([](RunConfig& c) { c.fd_step = 0.1; });
  expect_bad([](RunConfig& c) { c.bump.plateau_end = 0.3; });   // below the torus plateau
  expect_bad([](RunConfig& c) { c.bump.support_end = 0.2; });   // support inside plateau
  expect_bad([](RunConfig& c) { c.step.ramp_start = 0.9; });    // ramp reversed

  CHECK_THROWS_AS(run_verify([] {
                    RunConfig c;
                    c.rank = 1;
                    return c;
                  }()),
                  ConfigError);
}

TEST_CASE("run_verify produces nine passing checks on a small config") {
  const Report r = run_verify(small_config());
  CHECK(r.schema == 1);
  REQUIRE(r.checks.size() == 9);
  const std::vector<std::string> expected = {
      "cocycle_identity", "cover_equivariance", "g_path_structure",
      "group_model",      "jacobian_fd",        "loop_class_oracle",
      "psi_profile",      "rho_realization",    "twist_vectors"};
  for (std::size_t k = 0; k < expected.size(); ++k) CHECK(r.checks[k].name == expected[k]);
  for (const CheckRecord& c : r.checks) {
    CAPTURE(c.name);
    CHECK(c.status == CheckStatus::Pass);
    CHECK(c.measured <= c.threshold);
    CHECK(c.seconds >= 0.0);
  }
  CHECK(r.all_pass());

  const std::string text = to_text(r);
  CHECK(text.find("verification report (schema 1)") != std::string::npos);
  CHECK(text.find("psi_profile") != std::string::npos);
  CHECK(text.find("result: PASS (9/9)") != std::string::npos);
}

TEST_CASE("reports round trip through json") {
  const Report r = run_verify(small_config());
  const std::string encoded = to_json(r);
  CHECK(encoded.back() == '\n');
  const Report back = report_from_json(encoded);
  CHECK(back.schema == r.schema);
  CHECK(back.config == r.config);
  REQUIRE(back.checks.size() == r.checks.size());
  for (std::size_t k = 0; k < r.checks.size(); ++k) {
    CHECK(back.checks[k].name == r.checks[k].name);
    CHECK(back.checks[k].status == r.checks[k].status);
    CHECK(back.checks[k].measured == r.checks[k].measured);
    CHECK(back.checks[k].threshold == r.checks[k].threshold);
    CHECK(back.checks[k].seconds == r.checks[k].seconds);
    CHECK(back.checks[k].detail == r.checks[k].detail);
  }
}

TEST_CASE("an unmeasurable check is encoded as null and decoded as infinity") {
  Report r;
  r.config = RunConfig{};
  r.checks.push_back({"boom", CheckStatus::Error, std::numeric_limits<double>::infinity(), 0.0,
                      0.01, "exploded"});
  CHECK_FALSE(r.all_pass());

  const nlohmann::json j = nlohmann::json::parse(to_json(r));
  CHECK(j.at("checks").at(0).at("measured").is_null());
  CHECK(j.at("checks").at(0).at("status") == "error");

  const Report back = report_from_json(to_json(r));
  CHECK(std::isinf(back.checks.at(0).measured));
  CHECK(back.checks.at(0).status == CheckStatus::Error);
}

TEST_CASE("report_from_json rejects malformed input") {
  CHECK_THROWS_AS(report_from_json("not json"), std::invalid_argument);
  CHECK_THROWS_AS(report_from_json("{\"schema\":1"), std::invalid_argument);
  CHECK_THROWS_AS(report_from_json("{\"schema\":1}"), std::invalid_argument);

  Report r;
  r.config = RunConfig{};
  r.checks.push_back({"x", CheckStatus::Pass, 0.0, 1.0, 0.0, ""});
  nlohmann::json j = nlohmann::json::parse(to_json(r));
  j["schema"] = 2;
  CHECK_THROWS_AS(report_from_json(j.dump()), std::invalid_argument);
  j["schema"] = 1;
  j["checks"][0]["status"] = "maybe";
  CHECK_THROWS_AS(report_from_json(j.dump()), std::invalid_argument);
}

TEST_CASE("dump_psi emits a dense csv profile that round trips") {
  const RunConfig cfg = small_config();
  std::ostringstream os;
  dump_psi(cfg, os);
  const auto rows = lines_of(os.str());
  REQUIRE(rows.size() == 10001);
  CHECK(rows[0] == "r,psi,psi_prime");
  CHECK(rows[1] == "0,1,0");      // deep plateau
  CHECK(rows.back() == "1,0,0");  // past the support

  const auto mid = fields_of(rows[5001]);
  REQUIRE(mid.size() == 3);
  const double r = num(mid[0]);
  CHECK(r == 5000.0 / 9999.0);  // 17 significant digits reproduce the double
  CHECK(num(mid[1]) == psi(cfg.bump, r));
  CHECK(num(mid[2]) == psi_prime(cfg.bump, r));
}

TEST_CASE("dump_jacobian walks the loop and skips the exterior") {
  const RunConfig cfg = small_config();
  const ChartMap F = ChartMap::torus_shear(1, 2);
  std::ostringstream os;
  dump_jacobian(cfg, F, 1, os);
  const auto rows = lines_of(os.str());
  CHECK(rows[0] == "t,x,y,z,j11,j12,j13,j21,j22,j23,j31,j32,j33");
  // grid points inside [1/4, 3/4] only: 33 of the 65
  REQUIRE(rows.size() == 34);

  const TrackedLoop loop = generator_loop(1, F, 2, cfg.loop_samples);
  bool seen_mid = false;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto f = fields_of(rows[k]);
    REQUIRE(f.size() == 13);
    const double t = num(f[0]);
    const auto p = loop_point(loop, F, t);
    REQUIRE(p.has_value());
    if (t == 0.5) {
      seen_mid = true;
      CHECK(num(f[1]) == p->x());
      const Eigen::Matrix3d jm = F.jacobian_analytic(*p);
      CHECK(num(f[4]) == jm(0, 0));
      CHECK(num(f[8]) == jm(1, 1));
    }
  }
  CHECK(seen_mid);

  CHECK_THROWS_AS(dump_jacobian(cfg, F, 0, os), ConfigError);
}

TEST_CASE("dump_matrixpath lifts the derivative loop continuously") {
  const RunConfig cfg = small_config();
  std::ostringstream os;
  dump_matrixpath(cfg, ChartMap::sphere_twist(1), 1, os);
  const auto rows = lines_of(os.str());
  CHECK(rows[0] == "t,m11,m12,m13,m21,m22,m23,m31,m32,m33,qw,qx,qy,qz");
  REQUIRE(rows.size() == static_cast<std::size_t>(cfg.path_grid) + 2);
  CHECK(rows[1] == "0,1,0,0,0,1,0,0,0,1,1,0,0,0");  // identity start, canonical lift
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto f = fields_of(rows[k]);
    REQUIRE(f.size() == 14);
    const double qn = std::sqrt(num(f[10]) * num(f[10]) + num(f[11]) * num(f[11]) +
                                num(f[12]) * num(f[12]) + num(f[13]) * num(f[13]));
    CHECK(std::abs(qn - 1.0) <= 1e-12);
  }
  // the full collar turn ends the lift at the antipode of the start
  const auto last = fields_of(rows.back());
  CHECK(num(last[10]) == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("dump_loop emits the tracked image loop as json") {
  RunConfig cfg;  // default rank 3
  std::ostringstream os;
  dump_loop(cfg, ChartMap::torus_shear(1, 2), 1, os);
  const nlohmann::json j = nlohmann::json::parse(os.str());
  CHECK(j.at("rank") == 3);
  CHECK(j.at("map") == "F(1,2)");
  CHECK(j.at("generator") == 1);
  CHECK(j.at("word") == "a1 a2");
  CHECK(j.at("word_compact") == "1 2");
  REQUIRE(j.at("events").is_array());
  int crossings = 0, polylines = 0, stubs = 0;
  for (const auto& e : j.at("events")) {
    const std::string type = e.at("type");
    if (type == "crossing") {
      ++crossings;
      CHECK(e.contains("sphere"));
      CHECK(e.contains("sign"));
    } else if (type == "polyline") {
      ++polylines;
      CHECK(e.at("points").size() >= 2);
    } else {
      CHECK(type == "exterior");
      ++stubs;
    }
  }
  CHECK(crossings == 2);  // the sphere-1 crossing plus the inserted theta* crossing
  CHECK(polylines == 1);
  CHECK(stubs == 2);
}
