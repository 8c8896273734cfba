#pragma once

#include "klift/bundle_calculus.hpp"
#include "klift/structure.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace klift {

class SamplingPolicy {
 public:
  // Throws InvalidArgument for count < 1 or nonpositive radii/margin.
  SamplingPolicy(std::uint64_t seed = 42, int count = 50, double q_radius = 0.4, double p_radius = 1.0,
                 double boundary_margin = 0.05);

  std::uint64_t seed() const { return seed_; }
  int count() const { return count_; }
  double q_radius() const { return q_radius_; }
  double p_radius() const { return p_radius_; }
  double boundary_margin() const { return boundary_margin_; }

 private:
  std::uint64_t seed_;
  int count_;
  double q_radius_;
  double p_radius_;
  double boundary_margin_;
};

struct SampleSet {
  std::vector<ChartPoint> points;
  int attempts = 0;
  int rejected = 0;
};

// Deterministic points, uniform in the q-ball times the p-ball. Candidates failing
// `accept` are counted as rejected. Throws InvalidArgument if the q-ball plus margin
// does not fit in the chart, ExhaustedSampling if more than 90% of candidates are rejected.
SampleSet sample_points(const SpaceForm& sf, const SamplingPolicy& policy,
                        const std::function<bool(const ChartPoint&)>& accept = {});

enum class CheckId {
  almost_complex,
  acs_identities,
  integrability_identities,
  nijenhuis,
  metric_positive,
  hermitian,
  omega_consistency,
  d_omega,
  d_omega_closed_form,
  nabla_j,
};

std::string_view check_name(CheckId id);
std::optional<CheckId> parse_check(std::string_view name);
std::vector<CheckId> all_checks();

struct Tolerances {
  double algebraic = 1e-12;
  double identities = 1e-10;
  double finite_difference = 1e-5;
  double nabla_j = 1e-4;
  double falsification_factor = 10.0;

  double for_check(CheckId id) const;
};

struct CheckResult {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool passed = true;  // max_residual <= tolerance
  std::optional<ChartPoint> worst_point;
  int skipped = 0;
  int evaluated = 0;
  bool inconclusive = false;  // more than half of the points skipped
};

struct Verdicts {
  bool almost_complex = false;
  bool integrable = false;
  bool hermitian = false;
  bool almost_kahler = false;
  bool kahler = false;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  Verdicts verdicts;
  int accepted_points = 0;
  int rejected_points = 0;
  double min_denominator = 0.0;  // over accepted points; NaN for explicit b-coefficients

  const CheckResult* find(std::string_view name) const;
  bool all_passed() const;
};

struct SuiteOptions {
  Tolerances tolerances;
  std::vector<CheckId> checks = all_checks();
  Stencil stencil;
  // 0: KLIFT_THREADS if set, else the hardware concurrency.
  unsigned threads = 0;
};

// Verdicts need every defining check selected, conclusive and passed:
//   almost_complex = almost_complex, acs_identities
//   integrable     = almost_complex verdict, nijenhuis, integrability_identities
//   hermitian      = almost_complex verdict, metric_positive, hermitian
//   almost_kahler  = hermitian verdict, omega_consistency, d_omega, d_omega_closed_form
//   kahler         = integrable and almost_kahler
// nabla_j is an independent cross-check and only enters all_passed().
Verdicts compose_verdicts(const std::vector<CheckResult>& checks);

VerificationReport run_checks(const LiftStructure& structure, const std::vector<ChartPoint>& points,
                              const SuiteOptions& options = {});

// Samples admissible points for the structure, then runs the selected checks.
VerificationReport run_suite(const LiftStructure& structure, const SamplingPolicy& sampling,
                             const SuiteOptions& options = {});

enum class PerturbationTarget { b1, b3, c1_scale, mu };

struct PerturbationSpec {
  PerturbationTarget target = PerturbationTarget::b1;
  double delta = 0.0;  // additive, except the multiplicative c1-scale
};

// "b1", "b3", "mu", "c1-scale"
std::optional<PerturbationTarget> parse_perturbation_target(std::string_view name);
std::string_view perturbation_name(PerturbationTarget target);
CheckId targeted_check(PerturbationTarget target);

struct FalsificationResult {
  enum class Status { falsified, perturbation_too_small, independent_check_failed };

  VerificationReport report;
  Status status = Status::perturbation_too_small;
  std::string target_check;
  double floor = 0.0;     // falsification_factor * tolerance of the target check
  double observed = 0.0;  // max residual of the target check
  std::vector<std::string> broken_independent_checks;
};

// Runs the suite on the perturbed structure. The perturbation succeeds when the
// targeted check exceeds its floor while the checks it cannot influence still pass.
FalsificationResult falsify(const SpaceForm& space, const StructureConfig& base, const PerturbationSpec& spec,
                            const SamplingPolicy& sampling, const SuiteOptions& options = {});

}  // namespace klift
