#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "carnot/problem.hpp"
#include "json.hpp"

namespace carnot {

inline constexpr int exit_pass = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_usage = 2;

/// Result of one command. `fields` is flat-rendered as `key = value` lines in
/// text mode and dumped as-is in struct mode.
struct Report {
  std::string command;
  nlohmann::ordered_json fields = nlohmann::ordered_json::object();
  int exit_code = exit_pass;
};

std::string render_text(const Report& r);
std::string render_struct(const Report& r);

struct VerifyOptions {
  int max_k = default_max_k;
  /// Name of a basis element whose left-invariant field is checked alongside
  /// the realized fields (exercises the failure path).
  std::optional<std::string> inject;
  int points_per_field = 5;
  int translations = 10;
  unsigned seed = 20240917;
};

Report cmd_validate(const ProblemSpec& p);
Report cmd_prolong(const ProblemSpec& p, int max_k);
Report cmd_verify(const ProblemSpec& p, const VerifyOptions& opts);
Report cmd_oracle(const ProblemSpec& p, int degree, int max_k);

/// Full command-line entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace carnot
