#pragma once

#include "cosq/cf_core.hpp"
#include "cosq/cos_engine.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace cosq::cli {

enum ExitCode : int {
  kSuccess = 0,
  kToleranceFailure = 1,
  kUsageError = 2,
  kNonConvergence = 3,
};

enum class OutputFormat { Csv, Json };

struct RunConfig {
  std::string dist = "normal";
  double mean = 0.0;
  double sd = 1.0;
  double c = 1.0;
  double d = 1.0;
  double kappa = 0.75;
  double gamma = 1.0;
  double theta = 0.0;
  double nu = 1.0;

  std::vector<double> ps;
  std::vector<double> ys;
  std::size_t count = 1000;
  std::uint64_t seed = 42;
  int points = 21;

  ToleranceConfig tolerance;
  bool delta_given = false;
  bool no_refine = false;
  bool high_precision = false;  // validate: use the eps = 1e-9 reference build
  bool full_reference = false;  // reference builds with N = 1e7
  OutputFormat format = OutputFormat::Csv;
  std::string output;  // empty: standard output

  /// Throws std::invalid_argument for unknown families or invalid parameters.
  CharacteristicFunctionSpec make_spec() const;
};

int cmd_quantile(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_table1(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_sample(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses argv, dispatches to the subcommand and maps failures to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cosq::cli
