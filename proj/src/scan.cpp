#include "floqpol/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include <json.hpp>

#include "floqpol/analytic.hpp"
#include "floqpol/error.hpp"
#include "floqpol/floquet.hpp"
#include "floqpol/format.hpp"
#include "floqpol/initcond.hpp"
#include "floqpol/polarization.hpp"

namespace floqpol {

void ScanSpec::validate() const {
  if (!(start < stop)) throw ValidationError("scan: start must be < stop");
  if (points < 2) throw ValidationError("scan: points must be >= 2");
  if (spacing == GridSpacing::log && !(start > 0.0)) {
    throw ValidationError("scan: log spacing requires start > 0");
  }
  if (variable == ScanVariable::amplitude && start < 0.0) {
    throw ValidationError("scan: amplitudes must be >= 0");
  }
  if (variable == ScanVariable::frequency && !(start > 0.0)) {
    throw ValidationError("scan: frequencies must be > 0");
  }
  if (variable == ScanVariable::amplitude && !(fixed > 0.0)) {
    throw ValidationError("scan: fixed omega must be > 0");
  }
  if (variable == ScanVariable::frequency && !(fixed >= 0.0)) {
    throw ValidationError("scan: fixed amplitude must be >= 0");
  }
  if (k < 1 || k > model.levels()) throw ValidationError("scan: k out of range");
  truncation.validate();
}

Eigen::VectorXd ScanSpec::grid() const {
  if (spacing == GridSpacing::linear) {
    return Eigen::VectorXd::LinSpaced(points, start, stop);
  }
  const Eigen::VectorXd exponents =
      Eigen::VectorXd::LinSpaced(points, std::log(start), std::log(stop));
  Eigen::VectorXd out = exponents.array().exp();
  out(0) = start;
  out(points - 1) = stop;
  return out;
}

int ScanSpec::reported_harmonics() const {
  return n_report >= 0 ? n_report : 2 * truncation.n_max;
}

ScanRow evaluate_scan_point(const ScanSpec& spec, Index index) {
  ScanRow row;
  row.index = index;
  row.value = spec.grid()(index);
  if (spec.variable == ScanVariable::amplitude) {
    row.field = {row.value, spec.fixed};
  } else {
    row.field = {spec.fixed, row.value};
  }
  try {
    const FloquetSolution sol = solve_floquet(spec.model, row.field, spec.truncation);
    const InitialExpansion init = expand_initial_state(sol, spec.k);
    row.n_max = sol.n_max;
    row.ambiguous = sol.ambiguous_assignment;
    row.degenerate = init.degenerate;
    row.fourier = fourier_components(sol, init, spec.model,
                                     std::max(1, spec.reported_harmonics()));
    if (row.field.amplitude > 0.0) {
      row.chi = susceptibility(row.fourier(1), row.field.amplitude);
    } else {
      row.chi = sos_polarizability(spec.model, spec.k, row.field.omega);
      row.chi_sos_limit = true;
    }
    row.quasienergies.resize(sol.levels);
    for (Index s = 0; s < sol.levels; ++s) {
      row.quasienergies(s) = fold_to_zone(
          sol.quasienergies(sol.representatives[static_cast<std::size_t>(s)]),
          sol.omega);
    }
    row.fourier.conservativeResize(spec.reported_harmonics() + 1);
    row.ok = row.fourier.allFinite() && std::isfinite(*row.chi);
    if (!row.ok) row.message = "non-finite result";
  } catch (const std::exception& e) {
    row.ok = false;
    row.message = e.what();
  }
  return row;
}

ScanTable run_scan(const ScanSpec& spec) {
  spec.validate();
  ScanTable table;
  table.spec = spec;
  table.rows.resize(static_cast<std::size_t>(spec.points));

  const unsigned workers =
      std::clamp<unsigned>(spec.workers, 1u, static_cast<unsigned>(spec.points));
  std::atomic<Index> next{0};
  auto work = [&]() {
    for (Index i = next++; i < spec.points; i = next++) {
      table.rows[static_cast<std::size_t>(i)] = evaluate_scan_point(spec, i);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return table;
}

namespace {

std::string variable_name(ScanVariable v) {
  return v == ScanVariable::amplitude ? "amplitude" : "frequency";
}

std::string row_flags(const ScanRow& row) {
  std::string flags;
  if (row.ambiguous) flags += "ambiguous";
  if (row.degenerate) flags += flags.empty() ? "degenerate" : "|degenerate";
  return flags;
}

std::string sanitize(std::string text) {
  std::replace(text.begin(), text.end(), ',', ';');
  std::replace(text.begin(), text.end(), '\n', ' ');
  return text;
}

}  // namespace

std::string scan_to_csv(const ScanTable& table) {
  const auto& spec = table.spec;
  const int harmonics = spec.reported_harmonics();
  std::vector<std::string> header = {"index", variable_name(spec.variable),
                                     "omega", "amplitude", "status", "flags",
                                     "n_max"};
  if (spec.observables.fourier) {
    for (int n = 0; n <= harmonics; ++n) header.push_back("P_" + std::to_string(n));
  }
  if (spec.observables.chi) {
    header.push_back("chi");
    header.push_back("chi_source");
  }
  if (spec.observables.quasienergies) {
    for (Index s = 0; s < spec.model.levels(); ++s) {
      header.push_back("E_" + std::to_string(s + 1));
    }
  }
  header.push_back("message");

  std::string out = csv_row(header);
  for (const auto& row : table.rows) {
    std::vector<std::string> fields = {
        std::to_string(row.index), format_double(row.value),
        format_double(row.field.omega), format_double(row.field.amplitude),
        row.ok ? "OK" : "ERROR", row_flags(row), std::to_string(row.n_max)};
    if (spec.observables.fourier) {
      for (int n = 0; n <= harmonics; ++n) {
        fields.push_back(row.ok ? format_double(row.fourier(n)) : "");
      }
    }
    if (spec.observables.chi) {
      fields.push_back(row.ok && row.chi ? format_double(*row.chi) : "");
      fields.push_back(row.ok ? (row.chi_sos_limit ? "sos_limit" : "ratio") : "");
    }
    if (spec.observables.quasienergies) {
      for (Index s = 0; s < spec.model.levels(); ++s) {
        fields.push_back(row.ok ? format_double(row.quasienergies(s)) : "");
      }
    }
    fields.push_back(sanitize(row.message));
    out += csv_row(fields);
  }
  return out;
}

std::string scan_to_json(const ScanTable& table) {
  using nlohmann::json;
  const auto& spec = table.spec;
  json doc;
  doc["variable"] = variable_name(spec.variable);
  doc["model"] = spec.model.name;
  doc["k"] = spec.k;
  json rows = json::array();
  for (const auto& row : table.rows) {
    json r;
    r["index"] = row.index;
    r["value"] = row.value;
    r["omega"] = row.field.omega;
    r["amplitude"] = row.field.amplitude;
    r["status"] = row.ok ? "OK" : "ERROR";
    r["ambiguous"] = row.ambiguous;
    r["degenerate"] = row.degenerate;
    r["n_max"] = row.n_max;
    if (row.ok) {
      if (spec.observables.fourier) {
        r["fourier"] = std::vector<double>(row.fourier.data(),
                                           row.fourier.data() + row.fourier.size());
      }
      if (spec.observables.chi && row.chi) {
        r["chi"] = *row.chi;
        r["chi_source"] = row.chi_sos_limit ? "sos_limit" : "ratio";
      }
      if (spec.observables.quasienergies) {
        r["quasienergies"] = std::vector<double>(
            row.quasienergies.data(), row.quasienergies.data() + row.quasienergies.size());
      }
    } else {
      r["message"] = row.message;
    }
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

FitResult fit_susceptibilities(const Eigen::VectorXd& amplitudes,
                               const Eigen::VectorXd& p1, bool include_even) {
  if (amplitudes.size() != p1.size()) {
    throw PreconditionError("fit: amplitude and P_1 lengths differ");
  }
  if (amplitudes.size() < 4) throw PreconditionError("fit: need at least 4 points");
  if (!amplitudes.allFinite() || !p1.allFinite()) {
    throw PreconditionError("fit: non-finite input");
  }

  const Index cols = include_even ? 3 : 2;
  Eigen::MatrixXd design(amplitudes.size(), cols);
  const Eigen::ArrayXd f = amplitudes.array();
  design.col(0) = f;
  if (include_even) {
    design.col(1) = f.square();
    design.col(2) = f.cube();
  } else {
    design.col(1) = f.cube();
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sigma = svd.singularValues();
  const double condition = sigma(cols - 1) > 0.0
                               ? sigma(0) / sigma(cols - 1)
                               : std::numeric_limits<double>::infinity();
  if (condition > defaults::kFitConditionLimit) {
    throw PreconditionError("fit: design matrix is ill-conditioned (condition " +
                            format_double(condition) + ")");
  }
  const Eigen::VectorXd coef = svd.solve(p1);

  FitResult out;
  out.alpha = coef(0);
  out.gamma = coef(cols - 1);
  if (include_even) out.beta = coef(1);
  out.residual = (design * coef - p1).norm();
  out.condition = condition;
  out.amplitudes_used = amplitudes;
  return out;
}

}  // namespace floqpol
