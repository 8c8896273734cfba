#pragma once

#include "klift/structure.hpp"
#include "klift/verifier.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace klift {

// Everything a verify/falsify/sweep run needs, as read from a JSON config:
//
//   {
//     "manifold":     {"n": 3, "c": 1.0, "chart_radius": <optional>},
//     "coefficients": {"a1": <curve>, "a3": <curve>,
//                      "b_mode": "integrable" | {"b1": <curve>, "b3": <curve>}},
//     "metric":       {"lambda": <curve>, "mu": "kahler" | <curve>},
//     "sampling":     {"seed": 42, "count": 50, "q_radius": 0.4, "p_radius": 1.0,
//                      "boundary_margin": 0.05},
//     "tolerances":   {"algebraic": 1e-12, "identities": 1e-10, "finite_difference": 1e-5,
//                      "nabla_j": 1e-4, "falsification_factor": 10},
//     "stencil":      {"h": 5e-5, "richardson": false},
//     "checks":       ["nijenhuis", ...]
//   }
//
// A curve is {"family": "poly", "coeffs": [...]}, {"family": "exp", "A": .., "k": ..}
// or {"family": "const", "value": ..}. Only a1, a3 and lambda are required.
struct RunConfig {
  int n = 3;
  double c = 0.0;
  std::optional<double> chart_radius;
  StructureConfig structure;
  std::uint64_t seed = 42;
  int count = 50;
  double q_radius = 0.4;
  double p_radius = 1.0;
  double boundary_margin = 0.05;
  Tolerances tolerances;
  Stencil stencil;
  std::vector<CheckId> checks = all_checks();

  SpaceForm space() const;
  SamplingPolicy sampling() const;
  SuiteOptions suite() const;
};

// All parse and validation failures throw ConfigParseError naming the offending field.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig parse_run_config_text(const std::string& text);
RunConfig load_run_config(const std::string& path);

ScalarCurve curve_from_json(const nlohmann::json& j, const std::string& field);
nlohmann::json curve_to_json(const ScalarCurve& curve);

// Normalized echo: every default made explicit, parseable back to an equal config.
nlohmann::json config_to_json(const RunConfig& config);

nlohmann::json report_to_json(const VerificationReport& report);
nlohmann::json point_to_json(const ChartPoint& pt);

}  // namespace klift
