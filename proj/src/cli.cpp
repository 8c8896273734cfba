#include "klift/cli.hpp"

#include "klift/error.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace klift::cli {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::ConfigParseError, msg); }

double parse_double(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    config_error(what + ": not a number: \"" + text + "\"");
  }
  if (used != text.size() || !std::isfinite(v)) config_error(what + ": not a finite number: \"" + text + "\"");
  return v;
}

void emit(const std::optional<std::string>& out_path, const std::string& text) {
  if (!out_path || out_path->empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(*out_path);
  if (!out) config_error("cannot write " + *out_path);
  out << text;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

ScalarCurve with_parameter(const ScalarCurve& curve, const std::string& field, double value,
                           const std::string& address) {
  std::vector<double> p(curve.parameters().begin(), curve.parameters().end());
  switch (curve.family()) {
    case CurveFamily::exponential:
      if (field == "A") return ScalarCurve::exponential(value, p[1]);
      if (field == "k") return ScalarCurve::exponential(p[0], value);
      break;
    case CurveFamily::constant:
      if (field == "value") return ScalarCurve::constant(value);
      break;
    case CurveFamily::polynomial:
      if (field.size() > 1 && field[0] == 'c' && field.find_first_not_of("0123456789", 1) == std::string::npos) {
        const std::size_t i = std::stoul(field.substr(1));
        if (i > 64) break;
        if (p.size() <= i) p.resize(i + 1, 0.0);
        p[i] = value;
        return ScalarCurve::polynomial(std::move(p));
      }
      break;
  }
  config_error("parameter " + address + ": field \"" + field + "\" does not exist on this curve family");
}

struct SweepRow {
  double param = 0.0;
  std::vector<double> residuals;
  double min_denominator = std::nan("");
  int rejected = 0;
  int skipped = 0;
  bool kahler = false;
};

std::string coefficient_table(const RunConfig& cfg, const std::vector<double>& ts) {
  std::ostringstream os;
  os << "t,D,a1,a2,a3,b1,b2,b3,acs_identities,integrability_identities,hermitian_system,skipped\n";
  const StructureConfig& s = cfg.structure;
  for (double t : ts) {
    double d = std::nan(""), a2 = std::nan(""), b1 = std::nan(""), b2 = std::nan(""), b3 = std::nan("");
    double acs = std::nan(""), ident = std::nan(""), herm = std::nan("");
    double a1v = std::nan(""), a3v = std::nan("");
    int skipped = 0;
    try {
      const CurveJet a1 = s.a1.jet(t), a3 = s.a3.jet(t);
      a1v = a1.value;
      a3v = a3.value;
      double rb1 = 0.0, rb3 = 0.0;
      if (s.integrable_mode()) {
        if (a1.value > 0.0) d = integrability_denominator(a1, a3, cfg.c, t);
        const IntegrableB ib = integrable_b(a1, a3, cfg.c, t);
        rb1 = ib.b1;
        rb3 = ib.b3;
      } else {
        rb1 = (*s.b1)(t);
        rb3 = (*s.b3)(t);
      }
      const LiftCoefficients lc = complete_acs(a1.value, a3.value, rb1, rb3, t);
      a2 = lc.a2;
      b1 = lc.b1;
      b2 = lc.b2;
      b3 = lc.b3;
      if (!(lc.a2 + 2.0 * t * lc.b2 > 0.0)) throw Error(ErrorCode::PositivityViolation, "a2 + 2t b2 <= 0");
      acs = acs_identity_residuals(lc).max();
      ident = proof_identity_residuals(a1, a3, lc.b1, lc.b2, lc.b3, cfg.c, t).max();
      const double lambda = s.lambda(t);
      herm = hermitian_system_residual(lc, lambda * lc.a1, lambda * lc.a2, lambda * lc.a3);
    } catch (const Error&) {
      skipped = 1;
    }
    os << fmt(t) << ',' << fmt(d) << ',' << fmt(a1v) << ',' << fmt(a2) << ',' << fmt(a3v) << ',' << fmt(b1) << ','
       << fmt(b2) << ',' << fmt(b3) << ',' << fmt(acs) << ',' << fmt(ident) << ',' << fmt(herm) << ',' << skipped
       << '\n';
  }
  return os.str();
}

SweepRow suite_row(const RunConfig& cfg, double value) {
  SweepRow row;
  row.param = value;
  try {
    const LiftStructure structure(cfg.space(), cfg.structure);
    const VerificationReport report = run_suite(structure, cfg.sampling(), cfg.suite());
    for (const CheckResult& c : report.checks) {
      row.residuals.push_back(c.max_residual);
      row.skipped += c.skipped;
    }
    row.min_denominator = report.min_denominator;
    row.rejected = report.rejected_points;
    row.kahler = report.verdicts.kahler;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ExhaustedSampling && e.code() != ErrorCode::InvalidArgument) throw;
    row.residuals.assign(cfg.checks.size(), std::nan(""));
    row.rejected = 10 * cfg.count;
    row.skipped = static_cast<int>(cfg.checks.size()) * cfg.count;
  }
  return row;
}

}  // namespace

Range parse_range(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3) config_error("range must be start:stop:step, got \"" + text + "\"");
  Range r{parse_double(parts[0], "range start"), parse_double(parts[1], "range stop"),
          parse_double(parts[2], "range step")};
  if (r.step == 0.0) config_error("range step must be nonzero");
  if ((r.stop - r.start) / r.step < -1e-9) config_error("range step points away from stop");
  return r;
}

std::vector<double> range_values(const Range& range) {
  const double span = (range.stop - range.start) / range.step;
  const auto count = static_cast<long>(std::floor(span + 1e-9)) + 1;
  if (count > 100000) config_error("range has too many points");
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) values.push_back(range.start + static_cast<double>(i) * range.step);
  return values;
}

int verify_exit_code(const VerificationReport& report) { return report.all_passed() ? kExitOk : kExitFailed; }

void set_curve_parameter(StructureConfig& s, const std::string& address, double value) {
  const auto dot = address.find('.');
  if (dot == std::string::npos) config_error("curve parameter must look like <curve>.<field>, got " + address);
  const std::string curve = address.substr(0, dot), field = address.substr(dot + 1);
  auto set = [&](std::optional<ScalarCurve>& slot) {
    if (!slot) config_error("parameter " + address + ": curve " + curve + " is not set in this config");
    slot = with_parameter(*slot, field, value, address);
  };
  if (curve == "a1") {
    s.a1 = with_parameter(s.a1, field, value, address);
  } else if (curve == "a3") {
    s.a3 = with_parameter(s.a3, field, value, address);
  } else if (curve == "lambda") {
    s.lambda = with_parameter(s.lambda, field, value, address);
  } else if (curve == "b1") {
    set(s.b1);
  } else if (curve == "b3") {
    set(s.b3);
  } else if (curve == "mu") {
    set(s.mu);
  } else {
    config_error("unknown curve \"" + curve + "\" in parameter " + address);
  }
}

int cmd_verify(const std::string& config_path, const std::optional<std::string>& out_path, std::ostream& diag) {
  try {
    const RunConfig cfg = load_run_config(config_path);
    const LiftStructure structure(cfg.space(), cfg.structure);
    const VerificationReport report = run_suite(structure, cfg.sampling(), cfg.suite());
    json out = report_to_json(report);
    out["config"] = config_to_json(cfg);
    emit(out_path, out.dump(2) + "\n");
    for (const CheckResult& c : report.checks) {
      if (!c.passed || c.inconclusive) {
        diag << "check " << c.name << " failed: max residual " << c.max_residual << " > tolerance " << c.tolerance
             << (c.inconclusive ? " (inconclusive)" : "") << '\n';
      }
    }
    return verify_exit_code(report);
  } catch (const Error& e) {
    diag << e.what() << '\n';
    return kExitConfig;
  }
}

int cmd_falsify(const std::string& config_path, const std::string& perturbation,
                const std::optional<std::string>& out_path, std::ostream& diag) {
  try {
    const RunConfig cfg = load_run_config(config_path);
    const auto eq = perturbation.find('=');
    if (eq == std::string::npos) config_error("--perturb must look like <name>=<delta>");
    const std::string name = perturbation.substr(0, eq);
    const auto target = parse_perturbation_target(name);
    if (!target) config_error("unknown perturbation \"" + name + "\" (expected b1, b3, mu or c1-scale)");
    const PerturbationSpec spec{*target, parse_double(perturbation.substr(eq + 1), "--perturb " + name)};

    const FalsificationResult result = falsify(cfg.space(), cfg.structure, spec, cfg.sampling(), cfg.suite());
    json out = report_to_json(result.report);
    out["config"] = config_to_json(cfg);
    out["perturbation"] = {{"target", std::string(perturbation_name(spec.target))}, {"delta", spec.delta}};
    const char* status = "falsified";
    switch (result.status) {
      case FalsificationResult::Status::falsified: break;
      case FalsificationResult::Status::perturbation_too_small: status = "PerturbationTooSmall"; break;
      case FalsificationResult::Status::independent_check_failed: status = "IndependentCheckFailed"; break;
    }
    out["falsification"] = {{"status", status},
                            {"target_check", result.target_check},
                            {"floor", result.floor},
                            {"observed", result.observed},
                            {"broken_independent_checks", result.broken_independent_checks}};
    emit(out_path, out.dump(2) + "\n");
    if (result.status != FalsificationResult::Status::falsified) {
      diag << status << ": " << result.target_check << " residual " << result.observed << " vs floor "
           << result.floor << '\n';
      return kExitFailed;
    }
    return kExitOk;
  } catch (const Error& e) {
    diag << e.what() << '\n';
    return kExitConfig;
  }
}

int cmd_sweep(const std::string& config_path, const std::string& param, const std::string& range_text,
              const std::optional<std::string>& out_path, std::ostream& diag) {
  try {
    const RunConfig base = load_run_config(config_path);
    const std::vector<double> values = range_values(parse_range(range_text));

    if (param == "t") {
      for (double t : values)
        if (t < 0.0) config_error("t-grid must be nonnegative");
      emit(out_path, coefficient_table(base, values));
      return kExitOk;
    }

    std::vector<RunConfig> configs;
    for (double v : values) {
      RunConfig cfg = base;
      if (param == "c") {
        cfg.c = v;
        cfg.chart_radius.reset();
      } else {
        set_curve_parameter(cfg.structure, param, v);
      }
      configs.push_back(std::move(cfg));
    }

    std::ostringstream os;
    os << param;
    for (CheckId id : base.checks) os << ',' << check_name(id);
    os << ",min_D,rejected,skipped,kahler\n";
    for (std::size_t i = 0; i < configs.size(); ++i) {
      const SweepRow row = suite_row(configs[i], values[i]);
      os << fmt(row.param);
      for (double r : row.residuals) os << ',' << fmt(r);
      os << ',' << fmt(row.min_denominator) << ',' << row.rejected << ',' << row.skipped << ','
         << (row.kahler ? 1 : 0) << '\n';
    }
    emit(out_path, os.str());
    return kExitOk;
  } catch (const Error& e) {
    diag << e.what() << '\n';
    return kExitConfig;
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Verify general natural Kahler structures on cotangent bundles of space forms"};
  app.require_subcommand(1);

  std::string config, out, perturb, param, range;
  auto* verify = app.add_subcommand("verify", "Run the full check chain and write a JSON report");
  verify->add_option("--config", config, "JSON config")->required();
  verify->add_option("--out", out, "Report path (stdout if omitted)");

  auto* fals = app.add_subcommand("falsify", "Perturb one coefficient and confirm the targeted check fails");
  fals->add_option("--config", config, "JSON config")->required();
  fals->add_option("--perturb", perturb, "<name>=<delta> with name in b1, b3, mu, c1-scale")->required();
  fals->add_option("--out", out, "Report path (stdout if omitted)");

  auto* sweep = app.add_subcommand("sweep", "Tabulate residuals over a parameter range as CSV");
  sweep->add_option("--config", config, "JSON config")->required();
  sweep->add_option("--param", param, "t, c, or <curve>.<field>")->required();
  sweep->add_option("--range", range, "start:stop:step")->required();
  sweep->add_option("--out", out, "CSV path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  const std::optional<std::string> out_path = out.empty() ? std::nullopt : std::optional<std::string>(out);
  if (*verify) return cmd_verify(config, out_path, std::cerr);
  if (*fals) return cmd_falsify(config, perturb, out_path, std::cerr);
  return cmd_sweep(config, param, range, out_path, std::cerr);
}

}  // namespace klift::cli
