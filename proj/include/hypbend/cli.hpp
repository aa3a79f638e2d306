#pragma once

// Command-line front end. Exit codes: 0 pass, 1 property violation,
// 2 input or precondition error.

#include <iosfwd>
#include <string>
#include <vector>

namespace hypbend::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitInput = 2;

/// Numeric defaults shared by every subcommand.
struct Defaults {
  static constexpr double delta = 0.05;
  static constexpr double epsilon = 0.25;
  static constexpr double window = 5.0;
  static constexpr double tolerance = 1e-6;
  static constexpr int tail = 10;
};

/// Environment variable naming the directory that receives report files
/// when --out is not given.
inline constexpr const char* kReportDirEnv = "HYPBEND_REPORT_DIR";

/// Runs one command; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hypbend::cli
