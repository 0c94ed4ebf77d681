#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "treespec/grid.hpp"

namespace treespec::cli {

/// One command invocation. Unset optional parameters take per-command defaults.
struct JobConfig {
  std::string command;
  std::optional<std::string> input_path;
  /// Inline input; takes precedence over input_path.
  std::optional<nlohmann::json> input;
  std::optional<double> emin;
  std::optional<double> emax;
  std::optional<double> grid;
  std::optional<std::size_t> depth;
  std::optional<double> eta;
  std::optional<double> tol;
  std::optional<double> energy;
  std::optional<double> basepoint;
  std::optional<double> right_end;
  std::optional<std::size_t> horizon;
  bool extrapolate = false;
  std::string format = "json";
  std::optional<std::string> output_path;
  int threads = 0;
};

struct RunResult {
  int exit_code = 0;
  std::string output;  ///< emitted artifact (also written to output_path when set)
  std::string error;   ///< diagnostic for nonzero exit codes
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitMath = 2;

const std::vector<std::string>& commands();

/// Runs a job. Never throws: failures map to exit codes 1 (validation) and 2
/// (mathematical precondition, or a failed example reproduction).
RunResult run(const JobConfig& config);

/// RFC-4180 field quoting.
std::string csv_field(const std::string& s);
/// %.17g formatting.
std::string format_number(double x);

}  // namespace treespec::cli
