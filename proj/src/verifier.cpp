#include "klift/verifier.hpp"

#include "klift/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <string>
#include <thread>

namespace klift {

namespace {

constexpr std::array kAllChecks = {
    CheckId::almost_complex, CheckId::acs_identities,    CheckId::integrability_identities,
    CheckId::nijenhuis,      CheckId::metric_positive,   CheckId::hermitian,
    CheckId::omega_consistency, CheckId::d_omega,        CheckId::d_omega_closed_form,
    CheckId::nabla_j,
};

Vector uniform_ball(std::mt19937_64& rng, int n, double radius) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector v(n);
  do {
    for (int i = 0; i < n; ++i) v[i] = u(rng);
  } while (v.squaredNorm() > 1.0);
  return radius * v;
}

unsigned worker_count(unsigned requested, std::size_t jobs) {
  unsigned n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  if (const char* env = std::getenv("KLIFT_THREADS")) {
    const unsigned long cap = std::strtoul(env, nullptr, 10);
    if (cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(std::min(cap, 4096ul)));
  }
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

// Residuals of every selected check at one point; empty means skipped.
using PointOutcome = std::vector<std::optional<double>>;

double rel_scale(double a) { return std::max(1.0, a); }

std::optional<double> evaluate(CheckId id, const LiftStructure& s, const ChartPoint& pt, const Stencil& stencil) {
  const SpaceForm& sf = s.space();
  try {
    switch (id) {
      case CheckId::almost_complex: {
        const Matrix j = s.acs(pt).components;
        const auto m = j.rows();
        return max_abs(j * j + Matrix::Identity(m, m)) / rel_scale(max_abs(j) * max_abs(j));
      }
      case CheckId::acs_identities:
        return acs_identity_residuals(s.coefficients(pt).lift).max();
      case CheckId::integrability_identities: {
        const PointCoefficients pc = s.coefficients(pt);
        const LiftCoefficients& k = pc.lift;
        const ProofIdentityResiduals r =
            proof_identity_residuals(pc.a1, pc.a3, k.b1, k.b2, k.b3, sf.curvature_constant(), pc.t);
        return r.max() / (1.0 + std::abs(k.b1) + std::abs(k.b2) + std::abs(k.b3));
      }
      case CheckId::nijenhuis:
        return nijenhuis(sf, s.acs_field(), pt, stencil).max_abs();
      case CheckId::metric_positive: {
        try {
          const Matrix g = s.metric(pt).components;
          const double lowest = Eigen::SelfAdjointEigenSolver<Matrix>(g, Eigen::EigenvaluesOnly).eigenvalues()[0];
          return std::max(0.0, -lowest);
        } catch (const Error& e) {
          if (e.code() == ErrorCode::NotPositiveDefinite) return 1.0;
          throw;
        }
      }
      case CheckId::hermitian: {
        const FrameTensor j = s.acs(pt), g = s.metric(pt);
        const double scale = max_abs(j.components) * max_abs(j.components) * max_abs(g.components);
        return hermitian_residual(j, g) / rel_scale(scale);
      }
      case CheckId::omega_consistency: {
        const Matrix j = s.acs(pt).components, g = s.metric(pt).components;
        const Matrix w = s.omega(pt).components;
        return max_abs(w - g * j) / rel_scale(max_abs(g) * max_abs(j));
      }
      case CheckId::d_omega:
        return d_omega_numeric(sf, s.omega_field(), pt, stencil).max_abs();
      case CheckId::d_omega_closed_form: {
        const PointCoefficients pc = s.coefficients(pt);
        const Tensor3 numeric = d_omega_numeric(sf, s.omega_field(), pt, stencil);
        return (numeric - d_omega_closed_form(sf, pt, pc.lambda, pc.metric.mu)).max_abs();
      }
      case CheckId::nabla_j:
        return covariant_derivative_J(sf, s.acs_field(), s.metric_field(), pt, stencil);
    }
  } catch (const Error&) {
    return std::nullopt;
  }
  return std::nullopt;
}

bool check_ok(const std::vector<CheckResult>& checks, CheckId id) {
  for (const CheckResult& c : checks)
    if (c.name == check_name(id)) return c.passed && !c.inconclusive;
  return false;
}

std::vector<CheckId> independent_checks(PerturbationTarget target) {
  switch (target) {
    case PerturbationTarget::b1:
    case PerturbationTarget::b3:
      return {CheckId::almost_complex, CheckId::acs_identities, CheckId::metric_positive, CheckId::hermitian,
              CheckId::d_omega};
    case PerturbationTarget::c1_scale:
      return {CheckId::almost_complex, CheckId::acs_identities, CheckId::nijenhuis, CheckId::d_omega};
    case PerturbationTarget::mu:
      return {CheckId::almost_complex, CheckId::acs_identities, CheckId::nijenhuis, CheckId::metric_positive,
              CheckId::hermitian};
  }
  return {};
}

}  // namespace

SamplingPolicy::SamplingPolicy(std::uint64_t seed, int count, double q_radius, double p_radius,
                               double boundary_margin)
    : seed_(seed), count_(count), q_radius_(q_radius), p_radius_(p_radius), boundary_margin_(boundary_margin) {
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "sampling count must be at least 1");
  if (!(q_radius > 0.0) || !(p_radius > 0.0) || !(boundary_margin > 0.0) || !std::isfinite(q_radius) ||
      !std::isfinite(p_radius) || !std::isfinite(boundary_margin)) {
    throw Error(ErrorCode::InvalidArgument, "sampling radii and margin must be positive and finite");
  }
}

SampleSet sample_points(const SpaceForm& sf, const SamplingPolicy& policy,
                        const std::function<bool(const ChartPoint&)>& accept) {
  if (!(policy.q_radius() + policy.boundary_margin() < sf.chart_radius())) {
    throw Error(ErrorCode::InvalidArgument, "q_radius + boundary_margin must stay below the chart radius " +
                                                std::to_string(sf.chart_radius()));
  }
  std::mt19937_64 rng(policy.seed());
  SampleSet set;
  const int max_attempts = 10 * policy.count();
  while (static_cast<int>(set.points.size()) < policy.count() && set.attempts < max_attempts) {
    ++set.attempts;
    ChartPoint pt{uniform_ball(rng, sf.dim(), policy.q_radius()), uniform_ball(rng, sf.dim(), policy.p_radius())};
    if (accept && !accept(pt)) {
      ++set.rejected;
      continue;
    }
    set.points.push_back(std::move(pt));
  }
  if (static_cast<int>(set.points.size()) < policy.count()) {
    throw Error(ErrorCode::ExhaustedSampling, "rejected " + std::to_string(set.rejected) + " of " +
                                                  std::to_string(set.attempts) + " candidate points");
  }
  return set;
}

std::string_view check_name(CheckId id) {
  switch (id) {
    case CheckId::almost_complex: return "almost_complex";
    case CheckId::acs_identities: return "acs_identities";
    case CheckId::integrability_identities: return "integrability_identities";
    case CheckId::nijenhuis: return "nijenhuis";
    case CheckId::metric_positive: return "metric_positive";
    case CheckId::hermitian: return "hermitian";
    case CheckId::omega_consistency: return "omega_consistency";
    case CheckId::d_omega: return "d_omega";
    case CheckId::d_omega_closed_form: return "d_omega_closed_form";
    case CheckId::nabla_j: return "nabla_j";
  }
  return "unknown";
}

std::optional<CheckId> parse_check(std::string_view name) {
  for (CheckId id : kAllChecks)
    if (check_name(id) == name) return id;
  return std::nullopt;
}

std::vector<CheckId> all_checks() { return {kAllChecks.begin(), kAllChecks.end()}; }

double Tolerances::for_check(CheckId id) const {
  switch (id) {
    case CheckId::almost_complex:
    case CheckId::acs_identities:
    case CheckId::hermitian:
    case CheckId::omega_consistency:
      return algebraic;
    case CheckId::metric_positive:
      return 0.0;
    case CheckId::integrability_identities:
      return identities;
    case CheckId::nijenhuis:
    case CheckId::d_omega:
    case CheckId::d_omega_closed_form:
      return finite_difference;
    case CheckId::nabla_j:
      return nabla_j;
  }
  return 0.0;
}

const CheckResult* VerificationReport::find(std::string_view name) const {
  for (const CheckResult& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

bool VerificationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed && !c.inconclusive; });
}

Verdicts compose_verdicts(const std::vector<CheckResult>& checks) {
  Verdicts v;
  v.almost_complex = check_ok(checks, CheckId::almost_complex) && check_ok(checks, CheckId::acs_identities);
  v.integrable =
      v.almost_complex && check_ok(checks, CheckId::nijenhuis) && check_ok(checks, CheckId::integrability_identities);
  v.hermitian = v.almost_complex && check_ok(checks, CheckId::metric_positive) && check_ok(checks, CheckId::hermitian);
  v.almost_kahler = v.hermitian && check_ok(checks, CheckId::omega_consistency) &&
                    check_ok(checks, CheckId::d_omega) && check_ok(checks, CheckId::d_omega_closed_form);
  v.kahler = v.integrable && v.almost_kahler;
  return v;
}

VerificationReport run_checks(const LiftStructure& structure, const std::vector<ChartPoint>& points,
                              const SuiteOptions& options) {
  const std::size_t count = points.size();
  const std::vector<CheckId>& ids = options.checks;
  std::vector<PointOutcome> outcomes(count);

  auto work = [&](std::size_t begin, std::size_t step) {
    for (std::size_t i = begin; i < count; i += step) {
      PointOutcome& out = outcomes[i];
      out.reserve(ids.size());
      for (CheckId id : ids) out.push_back(evaluate(id, structure, points[i], options.stencil));
    }
  };
  const unsigned workers = worker_count(options.threads, count);
  if (workers <= 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
  }

  VerificationReport report;
  report.accepted_points = static_cast<int>(count);
  for (std::size_t c = 0; c < ids.size(); ++c) {
    CheckResult r;
    r.name = std::string(check_name(ids[c]));
    r.tolerance = options.tolerances.for_check(ids[c]);
    for (std::size_t i = 0; i < count; ++i) {
      const std::optional<double>& v = outcomes[i][c];
      if (!v || !std::isfinite(*v)) {
        ++r.skipped;
        continue;
      }
      ++r.evaluated;
      if (!r.worst_point || *v > r.max_residual) {
        r.max_residual = *v;
        r.worst_point = points[i];
      }
    }
    r.passed = r.max_residual <= r.tolerance;
    r.inconclusive = 2 * r.skipped > static_cast<int>(count);
    report.checks.push_back(std::move(r));
  }
  report.verdicts = compose_verdicts(report.checks);

  report.min_denominator = std::numeric_limits<double>::quiet_NaN();
  if (structure.config().integrable_mode()) {
    for (const ChartPoint& pt : points) {
      try {
        const double d = structure.coefficients(pt).denominator;
        if (std::isnan(report.min_denominator) || d < report.min_denominator) report.min_denominator = d;
      } catch (const Error&) {
      }
    }
  }
  return report;
}

VerificationReport run_suite(const LiftStructure& structure, const SamplingPolicy& sampling,
                             const SuiteOptions& options) {
  const SampleSet set = sample_points(structure.space(), sampling, [&structure](const ChartPoint& pt) {
    return !structure.rejection(pt).has_value();
  });
  VerificationReport report = run_checks(structure, set.points, options);
  report.rejected_points = set.rejected;
  return report;
}

std::optional<PerturbationTarget> parse_perturbation_target(std::string_view name) {
  if (name == "b1") return PerturbationTarget::b1;
  if (name == "b3") return PerturbationTarget::b3;
  if (name == "mu") return PerturbationTarget::mu;
  if (name == "c1-scale") return PerturbationTarget::c1_scale;
  return std::nullopt;
}

std::string_view perturbation_name(PerturbationTarget target) {
  switch (target) {
    case PerturbationTarget::b1: return "b1";
    case PerturbationTarget::b3: return "b3";
    case PerturbationTarget::mu: return "mu";
    case PerturbationTarget::c1_scale: return "c1-scale";
  }
  return "unknown";
}

CheckId targeted_check(PerturbationTarget target) {
  switch (target) {
    case PerturbationTarget::b1:
    case PerturbationTarget::b3:
      return CheckId::nijenhuis;
    case PerturbationTarget::c1_scale:
      return CheckId::hermitian;
    case PerturbationTarget::mu:
      return CheckId::d_omega;
  }
  return CheckId::nijenhuis;
}

FalsificationResult falsify(const SpaceForm& space, const StructureConfig& base, const PerturbationSpec& spec,
                            const SamplingPolicy& sampling, const SuiteOptions& options) {
  StructureConfig cfg = base;
  switch (spec.target) {
    case PerturbationTarget::b1: cfg.perturbation.b1_delta += spec.delta; break;
    case PerturbationTarget::b3: cfg.perturbation.b3_delta += spec.delta; break;
    case PerturbationTarget::mu: cfg.perturbation.mu_delta += spec.delta; break;
    case PerturbationTarget::c1_scale: cfg.perturbation.c1_scale *= spec.delta; break;
  }

  SuiteOptions opts = options;
  const CheckId target = targeted_check(spec.target);
  if (std::find(opts.checks.begin(), opts.checks.end(), target) == opts.checks.end()) opts.checks.push_back(target);

  const LiftStructure structure(space, cfg);
  FalsificationResult result;
  result.report = run_suite(structure, sampling, opts);
  result.target_check = std::string(check_name(target));
  result.floor = opts.tolerances.falsification_factor * opts.tolerances.for_check(target);
  result.observed = result.report.find(result.target_check)->max_residual;

  for (CheckId id : independent_checks(spec.target)) {
    const CheckResult* c = result.report.find(check_name(id));
    if (c && (!c->passed || c->inconclusive)) result.broken_independent_checks.emplace_back(c->name);
  }
  if (!(result.observed > result.floor)) {
    result.status = FalsificationResult::Status::perturbation_too_small;
  } else if (!result.broken_independent_checks.empty()) {
    result.status = FalsificationResult::Status::independent_check_failed;
  } else {
    result.status = FalsificationResult::Status::falsified;
  }
  return result;
}

}  // namespace klift
