#include "klift/config.hpp"

#include "klift/error.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace klift {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
  throw Error(ErrorCode::ConfigParseError, field + ": " + msg);
}

const json* member(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(field, "must be finite");
  return v;
}

double number_or(const json& obj, const char* key, double fallback, const std::string& prefix) {
  const json* m = member(obj, key);
  return m ? number(*m, prefix + "." + key) : fallback;
}

const json& object(const json& j, const std::string& field) {
  if (!j.is_object()) fail(field, "expected an object");
  return j;
}

const json& section(const json& root, const char* key) {
  static const json empty = json::object();
  const json* m = member(root, key);
  return m ? object(*m, key) : empty;
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known, const std::string& prefix) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) fail(prefix.empty() ? it.key() : prefix + "." + it.key(), "unknown field");
  }
}

}  // namespace

ScalarCurve curve_from_json(const json& j, const std::string& field) {
  object(j, field);
  const json* fam = member(j, "family");
  if (!fam || !fam->is_string()) fail(field + ".family", "expected \"poly\", \"exp\" or \"const\"");
  const std::string family = fam->get<std::string>();
  try {
    if (family == "poly" || family == "polynomial") {
      reject_unknown(j, {"family", "coeffs"}, field);
      const json* cs = member(j, "coeffs");
      if (!cs || !cs->is_array() || cs->empty()) fail(field + ".coeffs", "expected a nonempty array of numbers");
      std::vector<double> coeffs;
      for (std::size_t i = 0; i < cs->size(); ++i)
        coeffs.push_back(number((*cs)[i], field + ".coeffs[" + std::to_string(i) + "]"));
      return ScalarCurve::polynomial(std::move(coeffs));
    }
    if (family == "exp" || family == "exponential") {
      reject_unknown(j, {"family", "A", "k"}, field);
      const json* a = member(j, "A");
      const json* k = member(j, "k");
      if (!a) fail(field + ".A", "missing");
      if (!k) fail(field + ".k", "missing");
      return ScalarCurve::exponential(number(*a, field + ".A"), number(*k, field + ".k"));
    }
    if (family == "const" || family == "constant") {
      reject_unknown(j, {"family", "value"}, field);
      const json* v = member(j, "value");
      if (!v) fail(field + ".value", "missing");
      return ScalarCurve::constant(number(*v, field + ".value"));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigParseError) throw;
    fail(field, e.what());
  }
  fail(field + ".family", "unknown curve family \"" + family + "\"");
}

json curve_to_json(const ScalarCurve& curve) {
  const auto p = curve.parameters();
  switch (curve.family()) {
    case CurveFamily::polynomial: return {{"family", "poly"}, {"coeffs", std::vector<double>(p.begin(), p.end())}};
    case CurveFamily::exponential: return {{"family", "exp"}, {"A", p[0]}, {"k", p[1]}};
    case CurveFamily::constant: return {{"family", "const"}, {"value", p[0]}};
  }
  return nullptr;
}

RunConfig parse_run_config(const json& root) {
  object(root, "<root>");
  reject_unknown(root, {"manifold", "coefficients", "metric", "sampling", "tolerances", "stencil", "checks"}, "");
  RunConfig cfg;

  const json& man = section(root, "manifold");
  reject_unknown(man, {"n", "c", "chart_radius"}, "manifold");
  if (const json* n = member(man, "n")) {
    if (!n->is_number_integer()) fail("manifold.n", "expected an integer");
    cfg.n = n->get<int>();
  }
  cfg.c = number_or(man, "c", 0.0, "manifold");
  if (const json* r = member(man, "chart_radius")) cfg.chart_radius = number(*r, "manifold.chart_radius");

  const json* coeffs = member(root, "coefficients");
  if (!coeffs) fail("coefficients", "missing");
  object(*coeffs, "coefficients");
  reject_unknown(*coeffs, {"a1", "a3", "b_mode"}, "coefficients");
  const json* a1 = member(*coeffs, "a1");
  const json* a3 = member(*coeffs, "a3");
  if (!a1) fail("coefficients.a1", "missing");
  if (!a3) fail("coefficients.a3", "missing");
  cfg.structure.a1 = curve_from_json(*a1, "coefficients.a1");
  cfg.structure.a3 = curve_from_json(*a3, "coefficients.a3");
  if (const json* mode = member(*coeffs, "b_mode")) {
    if (mode->is_string()) {
      if (mode->get<std::string>() != "integrable") fail("coefficients.b_mode", "expected \"integrable\" or an object");
    } else {
      object(*mode, "coefficients.b_mode");
      reject_unknown(*mode, {"b1", "b3"}, "coefficients.b_mode");
      const json* b1 = member(*mode, "b1");
      const json* b3 = member(*mode, "b3");
      if (!b1) fail("coefficients.b_mode.b1", "missing");
      if (!b3) fail("coefficients.b_mode.b3", "missing");
      cfg.structure.b1 = curve_from_json(*b1, "coefficients.b_mode.b1");
      cfg.structure.b3 = curve_from_json(*b3, "coefficients.b_mode.b3");
    }
  }

  const json* met = member(root, "metric");
  if (!met) fail("metric", "missing");
  object(*met, "metric");
  reject_unknown(*met, {"lambda", "mu"}, "metric");
  const json* lambda = member(*met, "lambda");
  if (!lambda) fail("metric.lambda", "missing");
  cfg.structure.lambda = curve_from_json(*lambda, "metric.lambda");
  if (const json* mu = member(*met, "mu")) {
    if (mu->is_string()) {
      if (mu->get<std::string>() != "kahler") fail("metric.mu", "expected \"kahler\" or a curve");
    } else {
      cfg.structure.mu = curve_from_json(*mu, "metric.mu");
    }
  }

  const json& smp = section(root, "sampling");
  reject_unknown(smp, {"seed", "count", "q_radius", "p_radius", "boundary_margin"}, "sampling");
  if (const json* s = member(smp, "seed")) {
    if (!s->is_number_unsigned()) fail("sampling.seed", "expected a nonnegative integer");
    cfg.seed = s->get<std::uint64_t>();
  }
  if (const json* c = member(smp, "count")) {
    if (!c->is_number_integer()) fail("sampling.count", "expected an integer");
    cfg.count = c->get<int>();
  }
  cfg.q_radius = number_or(smp, "q_radius", cfg.q_radius, "sampling");
  cfg.p_radius = number_or(smp, "p_radius", cfg.p_radius, "sampling");
  cfg.boundary_margin = number_or(smp, "boundary_margin", cfg.boundary_margin, "sampling");

  const json& tol = section(root, "tolerances");
  reject_unknown(tol, {"algebraic", "identities", "finite_difference", "nabla_j", "falsification_factor"},
                 "tolerances");
  Tolerances& t = cfg.tolerances;
  t.algebraic = number_or(tol, "algebraic", t.algebraic, "tolerances");
  t.identities = number_or(tol, "identities", t.identities, "tolerances");
  t.finite_difference = number_or(tol, "finite_difference", t.finite_difference, "tolerances");
  t.nabla_j = number_or(tol, "nabla_j", t.nabla_j, "tolerances");
  t.falsification_factor = number_or(tol, "falsification_factor", t.falsification_factor, "tolerances");

  const json& st = section(root, "stencil");
  reject_unknown(st, {"h", "richardson"}, "stencil");
  cfg.stencil.h = number_or(st, "h", cfg.stencil.h, "stencil");
  if (!(cfg.stencil.h > 0.0)) fail("stencil.h", "must be positive");
  if (const json* r = member(st, "richardson")) {
    if (!r->is_boolean()) fail("stencil.richardson", "expected a boolean");
    cfg.stencil.richardson = r->get<bool>();
  }

  if (const json* checks = member(root, "checks")) {
    if (!checks->is_array() || checks->empty()) fail("checks", "expected a nonempty array of check names");
    cfg.checks.clear();
    for (std::size_t i = 0; i < checks->size(); ++i) {
      const json& c = (*checks)[i];
      const std::string field = "checks[" + std::to_string(i) + "]";
      if (!c.is_string()) fail(field, "expected a check name");
      const auto id = parse_check(c.get<std::string>());
      if (!id) fail(field, "unknown check \"" + c.get<std::string>() + "\"");
      cfg.checks.push_back(*id);
    }
  }

  double chart_radius = 0.0;
  try {
    chart_radius = cfg.space().chart_radius();
  } catch (const Error& e) {
    fail("manifold", e.what());
  }
  try {
    (void)cfg.sampling();
  } catch (const Error& e) {
    fail("sampling", e.what());
  }
  if (!(cfg.q_radius + cfg.boundary_margin < chart_radius)) {
    fail("sampling.q_radius",
         "q_radius + boundary_margin must stay below the chart radius " + std::to_string(chart_radius));
  }
  return cfg;
}

RunConfig parse_run_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigParseError, std::string("malformed JSON: ") + e.what());
  }
  return parse_run_config(j);
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigParseError, "cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config_text(ss.str());
}

SpaceForm RunConfig::space() const { return SpaceForm(n, c, chart_radius); }

SamplingPolicy RunConfig::sampling() const { return SamplingPolicy(seed, count, q_radius, p_radius, boundary_margin); }

SuiteOptions RunConfig::suite() const {
  SuiteOptions o;
  o.tolerances = tolerances;
  o.checks = checks;
  o.stencil = stencil;
  return o;
}

json config_to_json(const RunConfig& cfg) {
  json man = {{"n", cfg.n}, {"c", cfg.c}};
  if (cfg.chart_radius) man["chart_radius"] = *cfg.chart_radius;

  json coeffs = {{"a1", curve_to_json(cfg.structure.a1)}, {"a3", curve_to_json(cfg.structure.a3)}};
  if (cfg.structure.integrable_mode()) {
    coeffs["b_mode"] = "integrable";
  } else {
    coeffs["b_mode"] = {{"b1", curve_to_json(*cfg.structure.b1)}, {"b3", curve_to_json(*cfg.structure.b3)}};
  }
  json met = {{"lambda", curve_to_json(cfg.structure.lambda)}};
  met["mu"] = cfg.structure.mu ? curve_to_json(*cfg.structure.mu) : json("kahler");

  json checks = json::array();
  for (CheckId id : cfg.checks) checks.push_back(std::string(check_name(id)));

  return {
      {"manifold", man},
      {"coefficients", coeffs},
      {"metric", met},
      {"sampling",
       {{"seed", cfg.seed},
        {"count", cfg.count},
        {"q_radius", cfg.q_radius},
        {"p_radius", cfg.p_radius},
        {"boundary_margin", cfg.boundary_margin}}},
      {"tolerances",
       {{"algebraic", cfg.tolerances.algebraic},
        {"identities", cfg.tolerances.identities},
        {"finite_difference", cfg.tolerances.finite_difference},
        {"nabla_j", cfg.tolerances.nabla_j},
        {"falsification_factor", cfg.tolerances.falsification_factor}}},
      {"stencil", {{"h", cfg.stencil.h}, {"richardson", cfg.stencil.richardson}}},
      {"checks", checks},
  };
}

json point_to_json(const ChartPoint& pt) {
  return {{"q", std::vector<double>(pt.q.begin(), pt.q.end())}, {"p", std::vector<double>(pt.p.begin(), pt.p.end())}};
}

json report_to_json(const VerificationReport& report) {
  json checks = json::array();
  for (const CheckResult& c : report.checks) {
    checks.push_back({
        {"name", c.name},
        {"max_residual", c.max_residual},
        {"tolerance", c.tolerance},
        {"passed", c.passed},
        {"worst_point", c.worst_point ? point_to_json(*c.worst_point) : json(nullptr)},
        {"skipped", c.skipped},
        {"evaluated", c.evaluated},
        {"inconclusive", c.inconclusive},
    });
  }
  const Verdicts& v = report.verdicts;
  return {
      {"checks", checks},
      {"verdicts",
       {{"almost_complex", v.almost_complex},
        {"integrable", v.integrable},
        {"hermitian", v.hermitian},
        {"almost_kahler", v.almost_kahler},
        {"kahler", v.kahler}}},
      {"sampling", {{"accepted", report.accepted_points}, {"rejected", report.rejected_points}}},
      {"min_denominator", std::isnan(report.min_denominator) ? json(nullptr) : json(report.min_denominator)},
  };
}

}  // namespace klift
