#ifndef FLOQPOL_CLI_HPP
#define FLOQPOL_CLI_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "floqpol/error.hpp"
#include "floqpol/model.hpp"
#include "floqpol/scan.hpp"

namespace floqpol::cli {

enum class Subcommand { solve, fourier, timeseries, propagate, scan, fit, analytic, compare };
enum class OutputFormat { csv, json };

/// Bad command line; maps to exit code 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// `--help` was given; carries the rendered help text (exit code 0).
class HelpRequested : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  Subcommand subcommand = Subcommand::solve;
  std::string model_path;
  std::optional<double> omega;
  std::optional<double> amplitude;
  TruncationConfig truncation;
  Index k = 1;
  std::string output_path;  // empty: stdout
  OutputFormat format = OutputFormat::csv;
  int n_report = -1;

  // time windows (timeseries, propagate, compare)
  double periods = defaults::kComparePeriods;
  std::optional<double> t_end;
  int samples_per_period = 50;
  int steps_per_period = defaults::kStepsPerPeriod;
  std::optional<double> dt;
  int stride = 1;
  bool allow_coarse_step = false;
  bool with_oracle = false;

  // scan / fit
  ScanVariable variable = ScanVariable::amplitude;
  double start = 0.0;
  double stop = 0.0;
  int points = 0;
  GridSpacing spacing = GridSpacing::linear;
  bool report_quasienergies = false;
  std::string input_path;
  bool include_even = false;
  unsigned workers = 1;

  // analytic
  double d12 = 1.0;
  double omega12 = 1.0;

  double compare_tol = defaults::kCompareTol;
};

/// Arguments exclude the program name. Throws UsageError or HelpRequested.
RunConfig parse_args(const std::vector<std::string>& args);

struct CompareReport {
  double max_abs_deviation = 0.0;
  double rms_deviation = 0.0;
  double tol = 0.0;
  int n_max = 0;
  Index samples = 0;
  bool pass = false;
};

/// Floquet P(t) against the RK4 oracle on the oracle's step grid.
CompareReport run_compare(const RunConfig& config);

/// Executes a parsed configuration, writing to config.output_path or `out`.
/// Returns the process exit code (0 success, 1 runtime error or failed
/// comparison).
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + run with exit-code mapping (2 for usage errors).
int main_entry(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err);

}  // namespace floqpol::cli

#endif  // FLOQPOL_CLI_HPP
