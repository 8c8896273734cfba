#pragma once

#include "klift/config.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace klift::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitConfig = 2;

struct Range {
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;
};

// "start:stop:step"; throws ConfigParseError for malformed text, zero step, or a step
// pointing away from stop.
Range parse_range(const std::string& text);
// start, start + step, ... up to and including stop (within 1e-9 step).
std::vector<double> range_values(const Range& range);

// Exit code for a verification report: 0 iff every selected check passed.
int verify_exit_code(const VerificationReport& report);

// Each command writes its JSON/CSV to out_path (stdout when empty) and diagnostics to diag.
int cmd_verify(const std::string& config_path, const std::optional<std::string>& out_path, std::ostream& diag);
int cmd_falsify(const std::string& config_path, const std::string& perturbation,
                const std::optional<std::string>& out_path, std::ostream& diag);
int cmd_sweep(const std::string& config_path, const std::string& param, const std::string& range,
              const std::optional<std::string>& out_path, std::ostream& diag);

// Sets a single curve parameter addressed as <curve>.<field>: curve is one of
// a1, a3, b1, b3, lambda, mu and field is A or k (exp), value (const) or c<i> (poly coefficient i).
void set_curve_parameter(StructureConfig& structure, const std::string& address, double value);

int run(int argc, char** argv);

}  // namespace klift::cli
