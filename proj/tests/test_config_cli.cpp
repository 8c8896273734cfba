#include "support.hpp"

#include "klift/cli.hpp"

#include <sys/wait.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ktest;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("klift_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write(const std::string& name, const json& j) {
  const auto path = (scratch() / name).string();
  std::ofstream(path) << j.dump();
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  FAIL("missing column " << name);
  return 0;
}

json flat_config() {
  return json::parse(R"({
    "manifold": {"n": 3, "c": 0},
    "coefficients": {"a1": {"family": "const", "value": 1}, "a3": {"family": "const", "value": 0},
                     "b_mode": "integrable"},
    "metric": {"lambda": {"family": "const", "value": 1}, "mu": "kahler"},
    "sampling": {"seed": 42, "count": 12}
  })");
}

json three_parameter_config() {
  return json::parse(R"({
    "manifold": {"n": 3, "c": 1},
    "coefficients": {"a1": {"family": "poly", "coeffs": [1, 1]}, "a3": {"family": "poly", "coeffs": [0, 1]},
                     "b_mode": "integrable"},
    "metric": {"lambda": {"family": "poly", "coeffs": [1, 1]}, "mu": "kahler"},
    "sampling": {"seed": 42, "count": 12, "p_radius": 0.7}
  })");
}

std::string parse_error(const json& j) {
  try {
    parse_run_config(j);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigParseError);
    return e.what();
  }
  FAIL("config was accepted");
  return {};
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("config parsing and defaults") {
  const RunConfig cfg = parse_run_config(flat_config());
  CHECK(cfg.n == 3);
  CHECK(cfg.c == 0.0);
  CHECK(cfg.count == 12);
  CHECK(cfg.q_radius == 0.4);
  CHECK(cfg.p_radius == 1.0);
  CHECK(cfg.structure.integrable_mode());
  CHECK(cfg.structure.kahler_mu());
  CHECK(cfg.checks.size() == 10);
  CHECK(cfg.stencil.h == 5e-5);

  json j = three_parameter_config();
  j["coefficients"]["b_mode"] = {{"b1", {{"family", "exponential"}, {"A", 0.1}, {"k", 1}}},
                                 {"b3", {{"family", "constant"}, {"value", 0}}}};
  j["metric"]["mu"] = {{"family", "polynomial"}, {"coeffs", {0.5}}};
  j["checks"] = {"almost_complex", "hermitian"};
  j["tolerances"] = {{"finite_difference", 1e-6}};
  j["stencil"] = {{"h", 1e-4}, {"richardson", true}};
  const RunConfig c2 = parse_run_config(j);
  CHECK_FALSE(c2.structure.integrable_mode());
  CHECK(c2.structure.b1->family() == CurveFamily::exponential);
  CHECK((*c2.structure.mu)(3.0) == 0.5);
  CHECK(c2.checks.size() == 2);
  CHECK(c2.tolerances.finite_difference == 1e-6);
  CHECK(c2.stencil.richardson);
}

TEST_CASE("config errors name the offending field") {
  json j = flat_config();
  j["coefficients"]["a2"] = 1;
  CHECK(contains(parse_error(j), "coefficients.a2"));

  j = flat_config();
  j["coefficients"]["a1"] = {{"family", "spline"}};
  CHECK(contains(parse_error(j), "coefficients.a1.family"));

  j = flat_config();
  j["coefficients"]["a1"] = {{"family", "poly"}, {"coeffs", json::array()}};
  CHECK(contains(parse_error(j), "coefficients.a1"));

  j = flat_config();
  j["manifold"]["n"] = 2;
  CHECK(contains(parse_error(j), "manifold"));

  j = flat_config();
  j["sampling"]["count"] = 0;
  CHECK(contains(parse_error(j), "sampling"));

  j = flat_config();
  j["manifold"]["c"] = -1;
  j["sampling"]["q_radius"] = 1.99;
  CHECK(contains(parse_error(j), "sampling.q_radius"));

  j = flat_config();
  j["checks"] = {"almost_complex", "wibble"};
  CHECK(contains(parse_error(j), "wibble"));

  j = flat_config();
  j["metric"]["mu"] = "sometimes";
  CHECK(contains(parse_error(j), "metric.mu"));

  j = flat_config();
  j["coefficients"]["b_mode"] = {{"b1", {{"family", "const"}, {"value", 0}}}};
  CHECK(contains(parse_error(j), "b_mode"));

  j = flat_config();
  j.erase("metric");
  CHECK(contains(parse_error(j), "metric"));

  CHECK(code_of([] { parse_run_config_text("{\"manifold\": "); }) == ErrorCode::ConfigParseError);
  CHECK(code_of([] { load_run_config("/nonexistent/klift.json"); }) == ErrorCode::ConfigParseError);
}

TEST_CASE("curve json round trip") {
  for (const auto& c : {ScalarCurve::polynomial({1, -2, 0.5}), ScalarCurve::exponential(2, -0.3),
                        ScalarCurve::constant(4)})
    CHECK(curve_from_json(curve_to_json(c), "x") == c);
}

TEST_CASE("config echo reproduces the run bit for bit") {
  const RunConfig cfg = parse_run_config(three_parameter_config());
  const json echo = config_to_json(cfg);
  const RunConfig again = parse_run_config(echo);
  CHECK(config_to_json(again) == echo);

  const auto r1 = report_to_json(run_suite(LiftStructure(cfg.space(), cfg.structure), cfg.sampling(), cfg.suite()));
  const auto r2 =
      report_to_json(run_suite(LiftStructure(again.space(), again.structure), again.sampling(), again.suite()));
  CHECK(r1.dump() == r2.dump());
}

TEST_CASE("report json") {
  const RunConfig cfg = parse_run_config(flat_config());
  const json r = report_to_json(run_suite(LiftStructure(cfg.space(), cfg.structure), cfg.sampling(), cfg.suite()));
  CHECK(r["checks"].size() == 10);
  CHECK(r["verdicts"]["kahler"] == true);
  CHECK(r["sampling"]["accepted"] == 12);
  CHECK(r["checks"][0].contains("max_residual"));
  CHECK(r["checks"][0].contains("tolerance"));
  CHECK(r["checks"][0].contains("passed"));
  const json p = point_to_json({vec({1, 2, 3}), vec({4, 5, 6})});
  CHECK(p["q"][2] == 3.0);
  CHECK(p["p"][0] == 4.0);
}

TEST_CASE("verify command exit codes") {
  std::ostringstream diag;
  const auto out = (scratch() / "report.json").string();
  CHECK(cli::cmd_verify(write("flat.json", flat_config()), out, diag) == 0);
  CHECK(json::parse(slurp(out))["verdicts"]["kahler"] == true);
  CHECK(json::parse(slurp(out))["config"] == config_to_json(parse_run_config(flat_config())));

  json j = flat_config();
  j["manifold"]["n"] = 2;
  CHECK(cli::cmd_verify(write("n2.json", j), out, diag) == 2);

  j = three_parameter_config();
  j["metric"]["mu"] = {{"family", "const"}, {"value", 0}};
  CHECK(cli::cmd_verify(write("mu0.json", j), out, diag) == 1);
  const json rep = json::parse(slurp(out));
  CHECK(rep["verdicts"]["almost_kahler"] == false);
  CHECK(rep["verdicts"]["hermitian"] == true);

  std::ofstream(scratch() / "broken.json") << "{ not json";
  CHECK(cli::cmd_verify((scratch() / "broken.json").string(), out, diag) == 2);
  CHECK(cli::cmd_verify((scratch() / "missing.json").string(), out, diag) == 2);
}

TEST_CASE("falsify command") {
  std::ostringstream diag;
  const auto cfg = write("three.json", three_parameter_config());
  const auto out = (scratch() / "fals.json").string();

  CHECK(cli::cmd_falsify(cfg, "b1=+0.05", out, diag) == 0);
  json r = json::parse(slurp(out));
  CHECK(r["falsification"]["status"] == "falsified");
  CHECK(r["falsification"]["target_check"] == "nijenhuis");
  CHECK(r["verdicts"]["integrable"] == false);

  CHECK(cli::cmd_falsify(cfg, "c1-scale=1.1", out, diag) == 0);
  r = json::parse(slurp(out));
  CHECK(r["falsification"]["target_check"] == "hermitian");
  CHECK(r["verdicts"]["hermitian"] == false);

  CHECK(cli::cmd_falsify(cfg, "mu=0.1", out, diag) == 0);
  CHECK(cli::cmd_falsify(cfg, "b3=0.05", out, diag) == 0);

  CHECK(cli::cmd_falsify(cfg, "b1=+1e-15", out, diag) == 1);
  CHECK(json::parse(slurp(out))["falsification"]["status"] == "PerturbationTooSmall");

  CHECK(cli::cmd_falsify(cfg, "a2=0.1", out, diag) == 2);
  CHECK(cli::cmd_falsify(cfg, "b1", out, diag) == 2);
  CHECK(cli::cmd_falsify(cfg, "b1=abc", out, diag) == 2);
}

TEST_CASE("ranges") {
  CHECK(cli::range_values(cli::parse_range("-1:1:0.25")).size() == 9);
  CHECK(cli::range_values(cli::parse_range("0:2:0.1")).size() == 21);
  CHECK(cli::range_values(cli::parse_range("1:0:-0.5")).size() == 3);
  CHECK(cli::range_values(cli::parse_range("0:0.95:0.1")).size() == 10);
  CHECK(code_of([] { cli::parse_range("0:1:0"); }) == ErrorCode::ConfigParseError);
  CHECK(code_of([] { cli::parse_range("0:1:-0.1"); }) == ErrorCode::ConfigParseError);
  CHECK(code_of([] { cli::parse_range("0:1"); }) == ErrorCode::ConfigParseError);
  CHECK(code_of([] { cli::parse_range("a:1:0.1"); }) == ErrorCode::ConfigParseError);
}

TEST_CASE("sweep over t on the flat linear family") {
  json j = flat_config();
  j["coefficients"]["a1"] = {{"family", "poly"}, {"coeffs", {1, 1}}};
  const auto cfg = write("lin.json", j);
  const auto out = (scratch() / "t.csv").string();
  std::ostringstream diag;
  REQUIRE(cli::cmd_sweep(cfg, "t", "0:2:0.1", out, diag) == 0);
  const auto rows = csv(slurp(out));
  REQUIRE(rows.size() == 22);
  const auto& head = rows[0];
  const auto it = column(head, "t"), id = column(head, "D"), is = column(head, "skipped");
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const double t = std::stod(rows[r][it]);
    CHECK(std::stod(rows[r][id]) == doctest::Approx(1 - t).epsilon(1e-9));
    const bool skipped = rows[r][is] == "1";
    CHECK(skipped == (t > 1 - 1e-9));
    if (!skipped) CHECK(std::stod(rows[r][column(head, "acs_identities")]) <= 1e-12);
  }
}

TEST_CASE("sweep over c") {
  json j = flat_config();
  j["coefficients"]["a1"] = {{"family", "poly"}, {"coeffs", {1, 1}}};
  const auto cfg = write("linc.json", j);
  const auto out = (scratch() / "c.csv").string();
  std::ostringstream diag;
  REQUIRE(cli::cmd_sweep(cfg, "c", "-1:1:0.25", out, diag) == 0);
  const auto rows = csv(slurp(out));
  REQUIRE(rows.size() == 10);
  const auto idx = column(rows[0], "min_D");
  CHECK(rows[0].front() == "c");
  for (std::size_t r = 2; r < rows.size(); ++r) CHECK(std::stod(rows[r][idx]) <= std::stod(rows[r - 1][idx]));
  CHECK(std::stod(rows[1][0]) == -1.0);
  CHECK(std::stod(rows[9][0]) == 1.0);
}

TEST_CASE("sweep over a curve parameter") {
  const auto cfg = write("three_sweep.json", three_parameter_config());
  const auto out = (scratch() / "k.csv").string();
  std::ostringstream diag;
  REQUIRE(cli::cmd_sweep(cfg, "lambda.c1", "0.5:1.5:0.5", out, diag) == 0);
  const auto rows = csv(slurp(out));
  REQUIRE(rows.size() == 4);
  const auto ik = column(rows[0], "kahler");
  for (std::size_t r = 1; r < 4; ++r) CHECK(rows[r][ik] == "1");

  CHECK(cli::cmd_sweep(cfg, "lambda.k", "0:1:0.5", out, diag) == 2);
  CHECK(cli::cmd_sweep(cfg, "b1.value", "0:1:0.5", out, diag) == 2);
  CHECK(cli::cmd_sweep(cfg, "zeta.c0", "0:1:0.5", out, diag) == 2);
  CHECK(cli::cmd_sweep(cfg, "t", "0:1:0", out, diag) == 2);
  CHECK(cli::cmd_sweep(cfg, "t", "1:0:0.5", out, diag) == 2);

  StructureConfig s = three_parameter();
  cli::set_curve_parameter(s, "a1.c3", 2.0);
  CHECK(s.a1.parameters().size() == 4);
  CHECK(s.a1.parameters()[2] == 0.0);
  cli::set_curve_parameter(s, "a3.c0", 0.5);
  CHECK(s.a3(0.0) == 0.5);
}

TEST_CASE("binary exit codes") {
  auto run = [](const std::string& args) {
    const int status = std::system((std::string(KLIFT_BINARY) + " " + args + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
  };
  const auto cfg = write("bin_flat.json", flat_config());
  const auto out = (scratch() / "bin.json").string();
  CHECK(run("verify --config " + cfg + " --out " + out) == 0);
  CHECK(run("--help") == 0);
  CHECK(run("") == 2);
  CHECK(run("verify") == 2);
  CHECK(run("sweep --config " + cfg + " --param t --range 0:1:0") == 2);
  json j = flat_config();
  j["manifold"]["n"] = 2;
  CHECK(run("verify --config " + write("bin_n2.json", j)) == 2);
}
