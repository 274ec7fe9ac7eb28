#include "floqpol/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "floqpol/analytic.hpp"
#include "floqpol/floquet.hpp"
#include "floqpol/format.hpp"
#include "floqpol/initcond.hpp"
#include "floqpol/oracle.hpp"
#include "floqpol/polarization.hpp"

namespace floqpol::cli {

using nlohmann::json;

namespace {

unsigned default_workers() {
  if (const char* env = std::getenv("FLOQPOL_WORKERS")) {
    try {
      const long value = std::stol(env);
      if (value >= 1) return static_cast<unsigned>(value);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

// Options shared between subcommands. CLI11 binds each flag per subcommand, so
// the same storage is registered several times.
struct Flags {
  std::string format = "csv";
  double omega = 0.0;
  double amplitude = 0.0;
  long k = 1;
  std::string variable = "amplitude";
  std::string spacing = "linear";
  std::map<const CLI::App*, CLI::Option*> omega_opt, field_opt;
};

void add_model(CLI::App* sub, RunConfig& cfg, bool required) {
  auto* opt = sub->add_option("--model", cfg.model_path, "Model JSON file (see docs/model-format.md)");
  if (required) opt->required();
}

void add_field(CLI::App* sub, Flags& flags) {
  flags.omega_opt[sub] = sub->add_option("--omega", flags.omega, "Field angular frequency (hartree)");
  flags.field_opt[sub] = sub->add_option("--field", flags.amplitude, "Field amplitude F (a.u.), default 0");
}

void add_truncation(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--nmax", cfg.truncation.n_max, "Photon blocks -N..N")
      ->capture_default_str()->check(CLI::PositiveNumber);
  sub->add_flag("--auto-converge", cfg.truncation.auto_converge,
                "Double nmax until P_1 changes by less than --converge-tol");
  sub->add_option("--converge-tol", cfg.truncation.tol, "Truncation convergence tolerance on P_1")
      ->capture_default_str();
  sub->add_option("--nmax-cap", cfg.truncation.n_max_cap, "Largest nmax tried by --auto-converge")
      ->capture_default_str();
  sub->add_option("--dim-cap", cfg.truncation.dimension_cap, "Largest Floquet matrix dimension")
      ->capture_default_str();
}

void add_k(CLI::App* sub, Flags& flags) {
  sub->add_option("--k", flags.k, "Initial stationary state (1-based)")->capture_default_str();
}

void add_output(CLI::App* sub, RunConfig& cfg, Flags& flags) {
  sub->add_option("--format", flags.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  sub->add_option("--out", cfg.output_path, "Output file (default stdout)");
}

void add_window(CLI::App* sub, RunConfig& cfg) {
  auto* periods = sub->add_option("--periods", cfg.periods, "Window length in field periods")
                      ->capture_default_str();
  auto* t_end = sub->add_option("--t-end", cfg.t_end, "Window end time (a.u.)");
  periods->excludes(t_end);
}

void add_stepping(CLI::App* sub, RunConfig& cfg) {
  auto* spp = sub->add_option("--steps-per-period", cfg.steps_per_period, "RK4 steps per field period")
                  ->capture_default_str()->check(CLI::PositiveNumber);
  auto* dt = sub->add_option("--dt", cfg.dt, "RK4 step (a.u.)");
  spp->excludes(dt);
  sub->add_flag("--allow-coarse-step", cfg.allow_coarse_step,
                "Accept steps longer than period/200");
}

bool given(const std::map<const CLI::App*, CLI::Option*>& opts, const CLI::App* sub) {
  auto it = opts.find(sub);
  return it != opts.end() && it->second->count() > 0;
}

}  // namespace

RunConfig parse_args(const std::vector<std::string>& args) {
  RunConfig cfg;
  cfg.workers = default_workers();
  Flags flags;

  CLI::App app{"Quasi-energies, sudden switch-on polarization and field-dependent "
               "susceptibility of few-level molecules in a monochromatic field",
               "floqpol"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "Print help for every subcommand");

  auto* solve = app.add_subcommand("solve", "Quasienergies, representatives and initial expansion");
  auto* fourier = app.add_subcommand("fourier", "Fourier components P_n of the periodic polarization");
  auto* timeseries = app.add_subcommand("timeseries", "P(t) from the Floquet expansion, optionally with the oracle");
  auto* propagate = app.add_subcommand("propagate", "Direct RK4 propagation of the level amplitudes");
  auto* scan = app.add_subcommand("scan", "Amplitude or frequency sweep of P_n and chi");
  auto* fit = app.add_subcommand("fit", "Odd-power fit P_1(F) ~ alpha F + gamma F^3");
  auto* analytic = app.add_subcommand("analytic", "Two-level estimate, convergence radius, sum-over-states");
  auto* compare = app.add_subcommand("compare", "Floquet P(t) against the propagation oracle");

  for (auto* sub : {solve, fourier, timeseries, propagate, compare}) {
    add_model(sub, cfg, true);
    add_field(sub, flags);
    add_k(sub, flags);
    add_output(sub, cfg, flags);
  }
  for (auto* sub : {solve, fourier, timeseries, compare}) add_truncation(sub, cfg);
  fourier->add_option("--nreport", cfg.n_report, "Highest harmonic reported (default 2*nmax)");

  for (auto* sub : {timeseries, propagate, compare}) add_window(sub, cfg);
  timeseries->add_option("--samples-per-period", cfg.samples_per_period, "Samples per field period")
      ->capture_default_str()->check(CLI::PositiveNumber);
  timeseries->add_flag("--with-oracle", cfg.with_oracle, "Add the RK4 oracle column");
  timeseries->add_option("--steps-per-period", cfg.steps_per_period, "Oracle RK4 steps per period")
      ->capture_default_str()->check(CLI::PositiveNumber);
  for (auto* sub : {propagate, compare}) add_stepping(sub, cfg);
  propagate->add_option("--stride", cfg.stride, "Write every n-th step")
      ->capture_default_str()->check(CLI::PositiveNumber);
  compare->add_option("--tol", cfg.compare_tol, "Pass threshold on max |P_floquet - P_oracle|")
      ->capture_default_str();

  // scan
  add_model(scan, cfg, true);
  add_field(scan, flags);
  add_k(scan, flags);
  add_output(scan, cfg, flags);
  add_truncation(scan, cfg);
  auto* variable = scan->add_option("--variable", flags.variable, "Scanned quantity")
                       ->check(CLI::IsMember({"amplitude", "frequency"}));
  auto* omega_scan = scan->add_flag("--omega-scan", "Shorthand for --variable frequency");
  auto* field_scan = scan->add_flag("--field-scan", "Shorthand for --variable amplitude");
  omega_scan->excludes(field_scan);
  variable->excludes(omega_scan)->excludes(field_scan);
  for (auto* sub : {scan, fit}) {
    sub->add_option("--start", cfg.start, "First grid value")->required(sub == scan);
    sub->add_option("--stop", cfg.stop, "Last grid value")->required(sub == scan);
    sub->add_option("--points", cfg.points, "Grid points")->required(sub == scan);
    sub->add_option("--spacing", flags.spacing, "Grid spacing")
        ->check(CLI::IsMember({"linear", "log"}))->capture_default_str();
    sub->add_option("--workers", cfg.workers, "Parallel grid workers (env FLOQPOL_WORKERS)")
        ->check(CLI::PositiveNumber);
  }
  scan->add_option("--nreport", cfg.n_report, "Highest harmonic reported (default 2*nmax)");
  scan->add_flag("--quasienergies", cfg.report_quasienergies, "Add folded representative quasienergies");

  // fit
  add_model(fit, cfg, false);
  add_field(fit, flags);
  add_k(fit, flags);
  add_output(fit, cfg, flags);
  add_truncation(fit, cfg);
  auto* input = fit->add_option("--input", cfg.input_path, "Scan CSV with amplitude and P_1 columns");
  fit->add_flag("--even", cfg.include_even, "Include the F^2 term");
  input->excludes(fit->get_option("--model"));

  // analytic
  analytic->add_option("--d12", cfg.d12, "Transition dipole D12")->capture_default_str();
  analytic->add_option("--omega12", cfg.omega12, "Transition frequency")->capture_default_str();
  add_field(analytic, flags);
  add_model(analytic, cfg, false);
  add_k(analytic, flags);
  add_output(analytic, cfg, flags);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp& e) {
    std::ostringstream out, err;
    app.exit(e, out, err);
    throw HelpRequested(out.str());
  } catch (const CLI::CallForAllHelp& e) {
    std::ostringstream out, err;
    app.exit(e, out, err);
    throw HelpRequested(out.str());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  const CLI::App* chosen = app.get_subcommands().front();
  const std::map<const CLI::App*, Subcommand> kinds = {
      {solve, Subcommand::solve},         {fourier, Subcommand::fourier},
      {timeseries, Subcommand::timeseries}, {propagate, Subcommand::propagate},
      {scan, Subcommand::scan},           {fit, Subcommand::fit},
      {analytic, Subcommand::analytic},   {compare, Subcommand::compare}};
  cfg.subcommand = kinds.at(chosen);
  cfg.format = flags.format == "json" ? OutputFormat::json : OutputFormat::csv;
  cfg.k = static_cast<Index>(flags.k);
  cfg.spacing = flags.spacing == "log" ? GridSpacing::log : GridSpacing::linear;
  if (given(flags.omega_opt, chosen)) cfg.omega = flags.omega;
  if (given(flags.field_opt, chosen)) cfg.amplitude = flags.amplitude;

  if (cfg.k < 1) throw UsageError("--k must be >= 1");
  switch (cfg.subcommand) {
    case Subcommand::solve:
    case Subcommand::fourier:
    case Subcommand::timeseries:
    case Subcommand::propagate:
    case Subcommand::compare:
    case Subcommand::analytic:
      if (!cfg.omega) throw UsageError("--omega is required");
      break;
    case Subcommand::scan: {
      if (omega_scan->count() > 0) flags.variable = "frequency";
      if (field_scan->count() > 0) flags.variable = "amplitude";
      cfg.variable = flags.variable == "frequency" ? ScanVariable::frequency
                                                   : ScanVariable::amplitude;
      if (cfg.variable == ScanVariable::frequency && !cfg.amplitude) {
        throw UsageError("frequency scan needs --field");
      }
      if (cfg.variable == ScanVariable::amplitude && !cfg.omega) {
        throw UsageError("amplitude scan needs --omega");
      }
      break;
    }
    case Subcommand::fit:
      if (cfg.input_path.empty()) {
        if (cfg.model_path.empty()) throw UsageError("fit needs --input or --model");
        if (!cfg.omega || cfg.points == 0) {
          throw UsageError("fit from a model needs --omega, --start, --stop, --points");
        }
      }
      break;
  }
  return cfg;
}

namespace {

double field_period(double omega) { return 2.0 * std::numbers::pi / omega; }

FieldConfig field_of(const RunConfig& cfg) {
  FieldConfig field{cfg.amplitude.value_or(0.0), cfg.omega.value_or(0.0)};
  field.validate();
  return field;
}

double window_end(const RunConfig& cfg) {
  return cfg.t_end ? *cfg.t_end : cfg.periods * field_period(*cfg.omega);
}

std::vector<double> to_vector(const Eigen::VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

std::string run_solve(const RunConfig& cfg) {
  const MolecularModel model = load_model(cfg.model_path);
  const FloquetSolution sol = solve_floquet(model, field_of(cfg), cfg.truncation);
  const InitialExpansion init = expand_initial_state(sol, cfg.k);

  if (cfg.format == OutputFormat::csv) {
    std::string out = csv_row({"j", "E_j", "folded_E_j", "dominant_state",
                               "central_weight", "is_representative"});
    for (Index j = 0; j < sol.dim(); ++j) {
      out += csv_row({std::to_string(j), format_double(sol.quasienergies(j)),
                      format_double(fold_to_zone(sol.quasienergies(j), sol.omega)),
                      std::to_string(sol.dominant_state[static_cast<std::size_t>(j)] + 1),
                      format_double(sol.central_weight(j)),
                      sol.is_representative(j) ? "1" : "0"});
    }
    return out;
  }

  json doc;
  doc["model"] = model.name;
  doc["omega"] = sol.omega;
  doc["amplitude"] = sol.amplitude;
  doc["n_max"] = sol.n_max;
  doc["k"] = cfg.k;
  json rows = json::array();
  for (Index j = 0; j < sol.dim(); ++j) {
    rows.push_back({{"j", j},
                    {"E", sol.quasienergies(j)},
                    {"folded_E", fold_to_zone(sol.quasienergies(j), sol.omega)},
                    {"dominant_state", sol.dominant_state[static_cast<std::size_t>(j)] + 1},
                    {"central_weight", sol.central_weight(j)},
                    {"is_representative", sol.is_representative(j)}});
  }
  doc["quasienergies"] = std::move(rows);
  doc["representatives"] = sol.representatives;
  doc["ambiguous_assignment"] = sol.ambiguous_assignment;
  doc["A"] = to_vector(init.A);
  doc["b_condition"] = init.b_condition;
  doc["reconstruction_error"] = init.reconstruction_error;
  doc["degenerate"] = init.degenerate;
  return doc.dump(2) + "\n";
}

std::string run_fourier(const RunConfig& cfg) {
  const MolecularModel model = load_model(cfg.model_path);
  const FloquetSolution sol = solve_floquet(model, field_of(cfg), cfg.truncation);
  const InitialExpansion init = expand_initial_state(sol, cfg.k);
  const PolarizationResult result = compute_polarization(sol, init, model, cfg.n_report);

  if (cfg.format == OutputFormat::csv) {
    std::string out = csv_row({"n", "P_n"});
    for (Index n = 0; n < result.fourier.size(); ++n) {
      out += csv_row({std::to_string(n), format_double(result.fourier(n))});
    }
    return out;
  }
  json doc;
  doc["n_max"] = sol.n_max;
  doc["fourier"] = to_vector(result.fourier);
  if (result.chi) {
    doc["chi"] = *result.chi;
    doc["chi_source"] = "ratio";
  } else {
    try {
      doc["chi"] = sos_polarizability(model, cfg.k, sol.omega);
      doc["chi_source"] = "sos_limit";
    } catch (const ResonanceError&) {
      doc["chi"] = nullptr;
    }
  }
  json beats = json::array();
  for (const auto& b : result.beats) {
    beats.push_back({{"i", b.i + 1}, {"j", b.j + 1}, {"frequency", b.frequency}, {"weight", b.weight}});
  }
  doc["beats"] = std::move(beats);
  doc["reconstruction_error"] = init.reconstruction_error;
  return doc.dump(2) + "\n";
}

std::string run_timeseries(const RunConfig& cfg) {
  const MolecularModel model = load_model(cfg.model_path);
  const FieldConfig field = field_of(cfg);
  const FloquetSolution sol = solve_floquet(model, field, cfg.truncation);
  const InitialExpansion init = expand_initial_state(sol, cfg.k);

  const double t_end = window_end(cfg);
  const double sample_dt = field_period(field.omega) / cfg.samples_per_period;
  const auto samples = std::max<Index>(1, static_cast<Index>(std::llround(t_end / sample_dt)));

  Eigen::VectorXd times;
  Eigen::VectorXd oracle;
  if (cfg.with_oracle) {
    const int ratio = (cfg.steps_per_period + cfg.samples_per_period - 1) / cfg.samples_per_period;
    PropagationOptions options;
    options.stride = ratio;
    const auto result = propagate(model, field, cfg.k, t_end,
                                  t_end / static_cast<double>(samples * ratio), options);
    times = result.times;
    oracle = dipole_of(result, model);
  } else {
    times = Eigen::VectorXd::LinSpaced(samples + 1, 0.0, t_end);
  }
  const Eigen::VectorXd floquet = polarization_time_series(sol, init, model, times);

  if (cfg.format == OutputFormat::csv) {
    std::string out = cfg.with_oracle ? csv_row({"t", "P_floquet", "P_oracle"})
                                      : csv_row({"t", "P_floquet"});
    for (Index i = 0; i < times.size(); ++i) {
      std::vector<std::string> fields = {format_double(times(i)), format_double(floquet(i))};
      if (cfg.with_oracle) fields.push_back(format_double(oracle(i)));
      out += csv_row(fields);
    }
    return out;
  }
  json doc;
  doc["t"] = to_vector(times);
  doc["P_floquet"] = to_vector(floquet);
  if (cfg.with_oracle) doc["P_oracle"] = to_vector(oracle);
  return doc.dump(2) + "\n";
}

std::string run_propagate(const RunConfig& cfg, std::ostream& err) {
  const MolecularModel model = load_model(cfg.model_path);
  const FieldConfig field = field_of(cfg);
  const double dt = cfg.dt ? *cfg.dt : field_period(field.omega) / cfg.steps_per_period;
  PropagationOptions options;
  options.allow_coarse_step = cfg.allow_coarse_step;
  options.stride = cfg.stride;
  const PropagationResult result = propagate(model, field, cfg.k, window_end(cfg), dt, options);
  if (result.coarse_step) {
    err << "warning: dt = " << result.dt << " is above period/"
        << defaults::kStepsPerPeriod << "\n";
  }
  const Eigen::VectorXd p = dipole_of(result, model);
  const Index s = model.levels();

  if (cfg.format == OutputFormat::csv) {
    std::vector<std::string> header = {"t"};
    for (Index i = 1; i <= s; ++i) {
      header.push_back("Re(c_" + std::to_string(i) + ")");
      header.push_back("Im(c_" + std::to_string(i) + ")");
    }
    header.push_back("P");
    std::string out = csv_row(header);
    for (Index t = 0; t < result.times.size(); ++t) {
      std::vector<std::string> fields = {format_double(result.times(t))};
      for (Index i = 0; i < s; ++i) {
        fields.push_back(format_double(result.amplitudes(i, t).real()));
        fields.push_back(format_double(result.amplitudes(i, t).imag()));
      }
      fields.push_back(format_double(p(t)));
      out += csv_row(fields);
    }
    return out;
  }
  json doc;
  doc["dt"] = result.dt;
  doc["norm_drift"] = result.norm_drift;
  doc["t"] = to_vector(result.times);
  json re = json::array(), im = json::array();
  for (Index i = 0; i < s; ++i) {
    re.push_back(to_vector(result.amplitudes.row(i).real().transpose()));
    im.push_back(to_vector(result.amplitudes.row(i).imag().transpose()));
  }
  doc["re"] = std::move(re);
  doc["im"] = std::move(im);
  doc["P"] = to_vector(p);
  return doc.dump(2) + "\n";
}

ScanSpec scan_spec_of(const RunConfig& cfg, MolecularModel model) {
  ScanSpec spec;
  spec.variable = cfg.variable;
  spec.start = cfg.start;
  spec.stop = cfg.stop;
  spec.points = cfg.points;
  spec.spacing = cfg.spacing;
  spec.fixed = cfg.variable == ScanVariable::amplitude ? cfg.omega.value_or(0.0)
                                                       : cfg.amplitude.value_or(0.0);
  spec.model = std::move(model);
  spec.k = cfg.k;
  spec.truncation = cfg.truncation;
  spec.n_report = cfg.n_report;
  spec.observables.quasienergies = cfg.report_quasienergies;
  spec.workers = cfg.workers;
  return spec;
}

std::string run_scan_command(const RunConfig& cfg) {
  ScanSpec spec = scan_spec_of(cfg, load_model(cfg.model_path));
  const ScanTable table = run_scan(spec);
  return cfg.format == OutputFormat::csv ? scan_to_csv(table) : scan_to_json(table);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string run_fit(const RunConfig& cfg) {
  std::vector<double> amplitudes, p1;
  if (!cfg.input_path.empty()) {
    std::ifstream in(cfg.input_path);
    if (!in) throw Error("cannot open " + cfg.input_path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty fit input");
    const auto header = split_csv(line);
    auto column = [&](const std::string& name) -> std::ptrdiff_t {
      auto it = std::find(header.begin(), header.end(), name);
      return it == header.end() ? -1 : it - header.begin();
    };
    const auto ca = column("amplitude"), cp = column("P_1"), cs = column("status");
    if (ca < 0 || cp < 0) throw ParseError("fit input needs amplitude and P_1 columns");
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto fields = split_csv(line);
      if (cs >= 0 && fields.at(static_cast<std::size_t>(cs)) != "OK") continue;
      try {
        amplitudes.push_back(std::stod(fields.at(static_cast<std::size_t>(ca))));
        p1.push_back(std::stod(fields.at(static_cast<std::size_t>(cp))));
      } catch (const std::exception&) {
        throw ParseError("fit input: bad row '" + line + "'");
      }
    }
  } else {
    RunConfig scan_cfg = cfg;
    scan_cfg.variable = ScanVariable::amplitude;
    scan_cfg.n_report = 1;
    const ScanTable table = run_scan(scan_spec_of(scan_cfg, load_model(cfg.model_path)));
    for (const auto& row : table.rows) {
      if (!row.ok) continue;
      amplitudes.push_back(row.field.amplitude);
      p1.push_back(row.fourier(1));
    }
  }

  const FitResult fit = fit_susceptibilities(
      Eigen::Map<const Eigen::VectorXd>(amplitudes.data(), static_cast<Index>(amplitudes.size())),
      Eigen::Map<const Eigen::VectorXd>(p1.data(), static_cast<Index>(p1.size())),
      cfg.include_even);
  if (cfg.format == OutputFormat::csv) {
    return csv_row({"alpha", "gamma", "beta", "residual", "condition", "points"}) +
           csv_row({format_double(fit.alpha), format_double(fit.gamma),
                    fit.beta ? format_double(*fit.beta) : "", format_double(fit.residual),
                    format_double(fit.condition), std::to_string(fit.amplitudes_used.size())});
  }
  json doc;
  doc["alpha"] = fit.alpha;
  doc["gamma"] = fit.gamma;
  if (fit.beta) doc["beta"] = *fit.beta;
  doc["residual"] = fit.residual;
  doc["condition"] = fit.condition;
  doc["amplitudes"] = to_vector(fit.amplitudes_used);
  return doc.dump(2) + "\n";
}

std::string run_analytic(const RunConfig& cfg) {
  TwoLevelParams p{cfg.d12, *cfg.omega, cfg.omega12, cfg.amplitude.value_or(0.0)};
  std::vector<std::pair<std::string, double>> values;
  values.emplace_back("two_level_p1", two_level_p1(p));
  values.emplace_back("convergence_radius", convergence_radius(p));
  if (!cfg.model_path.empty()) {
    values.emplace_back("sos_polarizability",
                        sos_polarizability(load_model(cfg.model_path), cfg.k, *cfg.omega));
  }
  if (cfg.format == OutputFormat::csv) {
    std::string out = csv_row({"quantity", "value"});
    for (const auto& [name, value] : values) out += csv_row({name, format_double(value)});
    return out;
  }
  json doc;
  for (const auto& [name, value] : values) {
    if (std::isfinite(value)) {
      doc[name] = value;
    } else {
      doc[name] = "inf";
    }
  }
  return doc.dump(2) + "\n";
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.output_path, std::ios::binary);
  if (!file) throw Error("cannot write " + cfg.output_path);
  file << text;
}

}  // namespace

CompareReport run_compare(const RunConfig& cfg) {
  const MolecularModel model = load_model(cfg.model_path);
  const FieldConfig field = field_of(cfg);
  const FloquetSolution sol = solve_floquet(model, field, cfg.truncation);
  const InitialExpansion init = expand_initial_state(sol, cfg.k);

  const double dt = cfg.dt ? *cfg.dt : field_period(field.omega) / cfg.steps_per_period;
  PropagationOptions options;
  options.allow_coarse_step = cfg.allow_coarse_step;
  const PropagationResult result = propagate(model, field, cfg.k, window_end(cfg), dt, options);
  const Eigen::VectorXd oracle = dipole_of(result, model);
  const Eigen::VectorXd floquet = polarization_time_series(sol, init, model, result.times);
  const Eigen::VectorXd diff = floquet - oracle;

  CompareReport report;
  report.max_abs_deviation = diff.cwiseAbs().maxCoeff();
  report.rms_deviation = std::sqrt(diff.squaredNorm() / static_cast<double>(diff.size()));
  report.tol = cfg.compare_tol;
  report.n_max = sol.n_max;
  report.samples = diff.size();
  report.pass = report.max_abs_deviation <= cfg.compare_tol;
  return report;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::string text;
  int code = 0;
  switch (cfg.subcommand) {
    case Subcommand::solve: text = run_solve(cfg); break;
    case Subcommand::fourier: text = run_fourier(cfg); break;
    case Subcommand::timeseries: text = run_timeseries(cfg); break;
    case Subcommand::propagate: text = run_propagate(cfg, err); break;
    case Subcommand::scan: text = run_scan_command(cfg); break;
    case Subcommand::fit: text = run_fit(cfg); break;
    case Subcommand::analytic: text = run_analytic(cfg); break;
    case Subcommand::compare: {
      const CompareReport r = run_compare(cfg);
      if (cfg.format == OutputFormat::csv) {
        text = csv_row({"max_abs_deviation", "rms_deviation", "tol", "n_max", "samples", "result"}) +
               csv_row({format_double(r.max_abs_deviation), format_double(r.rms_deviation),
                        format_double(r.tol), std::to_string(r.n_max),
                        std::to_string(r.samples), r.pass ? "PASS" : "FAIL"});
      } else {
        json doc = {{"max_abs_deviation", r.max_abs_deviation},
                    {"rms_deviation", r.rms_deviation},
                    {"tol", r.tol},
                    {"n_max", r.n_max},
                    {"samples", r.samples},
                    {"result", r.pass ? "PASS" : "FAIL"}};
        text = doc.dump(2) + "\n";
      }
      code = r.pass ? 0 : 1;
      break;
    }
  }
  emit(cfg, text, out);
  return code;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = parse_args(args);
  } catch (const HelpRequested& help) {
    out << help.what();
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\nRun with --help for usage.\n";
    return 2;
  }
  try {
    return run(cfg, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace floqpol::cli
