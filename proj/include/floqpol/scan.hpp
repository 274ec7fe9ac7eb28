#ifndef FLOQPOL_SCAN_HPP
#define FLOQPOL_SCAN_HPP

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "floqpol/model.hpp"

namespace floqpol {

enum class ScanVariable { amplitude, frequency };
enum class GridSpacing { linear, log };

struct ScanObservables {
  bool fourier = true;
  bool chi = true;
  bool quasienergies = false;
};

/// Sweep of F at fixed omega, or of omega at fixed F. `fixed` holds the
/// quantity that is not scanned.
struct ScanSpec {
  ScanVariable variable = ScanVariable::amplitude;
  double start = 0.0;
  double stop = 1.0;
  int points = 2;
  GridSpacing spacing = GridSpacing::linear;
  double fixed = 1.0;
  MolecularModel model;
  Index k = 1;
  TruncationConfig truncation;
  int n_report = -1;  // < 0: 2 * truncation.n_max
  ScanObservables observables;
  unsigned workers = 1;

  void validate() const;
  Eigen::VectorXd grid() const;
  int reported_harmonics() const;
};

struct ScanRow {
  Index index = 0;
  double value = 0.0;
  FieldConfig field;
  bool ok = false;
  std::string message;  // failure reason when !ok
  int n_max = 0;        // truncation actually used
  Eigen::VectorXd fourier;
  std::optional<double> chi;
  bool chi_sos_limit = false;  // F == 0: weak-field polarizability reported
  Eigen::VectorXd quasienergies;  // folded, one per physical state
  bool ambiguous = false;
  bool degenerate = false;
};

struct ScanTable {
  ScanSpec spec;
  std::vector<ScanRow> rows;
};

/// Full solve -> initial expansion -> polarization pipeline for grid point
/// `index`. Failures are captured in the row, never thrown.
ScanRow evaluate_scan_point(const ScanSpec& spec, Index index);

/// Evaluates all grid points on spec.workers threads; rows come back in grid
/// order regardless of completion order.
ScanTable run_scan(const ScanSpec& spec);

std::string scan_to_csv(const ScanTable& table);
std::string scan_to_json(const ScanTable& table);

/// Least-squares P_1(F) ~ alpha F + gamma F^3 (+ beta F^2 with include_even).
struct FitResult {
  double alpha = 0.0;
  double gamma = 0.0;
  std::optional<double> beta;
  double residual = 0.0;  // ||X c - P||_2
  double condition = 1.0;
  Eigen::VectorXd amplitudes_used;
};

FitResult fit_susceptibilities(const Eigen::VectorXd& amplitudes,
                               const Eigen::VectorXd& p1,
                               bool include_even = false);

}  // namespace floqpol

#endif  // FLOQPOL_SCAN_HPP
