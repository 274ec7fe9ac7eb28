#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "floqpol/analytic.hpp"
#include "floqpol/error.hpp"
#include "floqpol/scan.hpp"
#include "oracles.hpp"

using namespace floqpol;
namespace ft = floqpol::testing;

namespace {

ScanSpec base_spec(ScanVariable v, double start, double stop, int points, double fixed) {
  ScanSpec spec;
  spec.variable = v;
  spec.start = start;
  spec.stop = stop;
  spec.points = points;
  spec.fixed = fixed;
  spec.model = two_level_model(1.0, 1.0);
  return spec;
}

Eigen::VectorXd column_p1(const ScanTable& t) {
  Eigen::VectorXd p(static_cast<Index>(t.rows.size()));
  for (std::size_t i = 0; i < t.rows.size(); ++i) p(static_cast<Index>(i)) = t.rows[i].fourier(1);
  return p;
}

}  // namespace

TEST_CASE("ScanSpec validation and grids") {
  auto spec = base_spec(ScanVariable::amplitude, 0.0, 0.1, 5, 0.9);
  CHECK_NOTHROW(spec.validate());
  CHECK(spec.grid() == Eigen::VectorXd::LinSpaced(5, 0.0, 0.1));

  auto bad = spec;
  bad.stop = 0.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = spec;
  bad.points = 1;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = spec;
  bad.spacing = GridSpacing::log;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = spec;
  bad.k = 3;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  CHECK_THROWS_AS(run_scan(bad), ValidationError);

  auto log = base_spec(ScanVariable::amplitude, 1e-4, 1e-1, 4, 0.9);
  log.spacing = GridSpacing::log;
  const auto g = log.grid();
  CHECK(g(0) == 1e-4);
  CHECK(g(3) == 1e-1);
  CHECK(g(1) == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(g(2) == doctest::Approx(1e-2).epsilon(1e-12));
}

TEST_CASE("amplitude scan: the F = 0 row reports the sum-over-states limit") {
  auto spec = base_spec(ScanVariable::amplitude, 0.0, 0.05, 6, 0.9);
  spec.n_report = 3;
  const auto table = run_scan(spec);
  REQUIRE(table.rows.size() == 6);
  const auto& r0 = table.rows[0];
  CHECK(r0.ok);
  CHECK(r0.fourier(1) == 0.0);
  CHECK(r0.chi_sos_limit);
  CHECK(*r0.chi == sos_polarizability(spec.model, 1, 0.9));
  for (std::size_t i = 1; i < 6; ++i) {
    CHECK(table.rows[i].ok);
    CHECK_FALSE(table.rows[i].chi_sos_limit);
    CHECK(*table.rows[i].chi == table.rows[i].fourier(1) / table.rows[i].field.amplitude);
  }
  const std::string csv = scan_to_csv(table);
  CHECK(csv.rfind("index,amplitude,omega,amplitude,status,flags,n_max,P_0,P_1,P_2,P_3,chi,chi_source,message\n", 0) == 0);
  CHECK(csv.find(",sos_limit,") != std::string::npos);
}

TEST_CASE("a failing grid point is recorded in its row only") {
  // F = 0 exactly on the transition: the weak-field limit does not exist there
  auto spec = base_spec(ScanVariable::frequency, 0.9, 1.1, 3, 0.0);
  const auto table = run_scan(spec);
  CHECK(table.rows[0].ok);
  CHECK_FALSE(table.rows[1].ok);
  CHECK(table.rows[1].message.find("resonan") != std::string::npos);
  CHECK(table.rows[2].ok);
  const std::string csv = scan_to_csv(table);
  CHECK(csv.find(",ERROR,") != std::string::npos);
  const std::string json = scan_to_json(table);
  CHECK(json.find("\"ERROR\"") != std::string::npos);
}

TEST_CASE("rows do not depend on evaluation order or worker count") {
  auto spec = base_spec(ScanVariable::frequency, 0.3, 1.2, 41, 0.05);
  spec.model = load_model(ft::data_file("three_level.json"));
  spec.observables.quasienergies = true;
  const auto serial = run_scan(spec);

  ScanTable shuffled;
  shuffled.spec = spec;
  shuffled.rows.resize(41);
  std::vector<Index> order(41);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), std::mt19937(4));
  for (Index i : order) shuffled.rows[static_cast<std::size_t>(i)] = evaluate_scan_point(spec, i);
  CHECK(scan_to_csv(shuffled) == scan_to_csv(serial));

  spec.workers = 4;
  const auto parallel = run_scan(spec);
  CHECK(scan_to_csv(parallel) == scan_to_csv(serial));
  CHECK(scan_to_json(parallel) == scan_to_json(serial));
}

TEST_CASE("frequency scan across the transition: finite chi peaking in the dressed window") {
  auto spec = base_spec(ScanVariable::frequency, 0.8, 1.2, 201, 0.05);
  spec.n_report = 2;
  spec.workers = 4;
  const auto coarse = run_scan(spec);
  Index arg = 0;
  double peak = -1.0;
  for (const auto& row : coarse.rows) {
    REQUIRE(row.ok);
    CHECK(std::isfinite(*row.chi));
    if (std::abs(*row.chi) > peak) {
      peak = std::abs(*row.chi);
      arg = row.index;
    }
  }
  const double w_peak = coarse.rows[static_cast<std::size_t>(arg)].value;
  CHECK(w_peak > 1.0 - 0.05);
  CHECK(w_peak < 1.0 + 0.05);

  // refined solve around the window
  auto fine = base_spec(ScanVariable::frequency, 0.94, 1.06, 1201, 0.05);
  fine.n_report = 1;
  fine.workers = 4;
  const auto dense = run_scan(fine);
  double fine_peak = -1.0, fine_w = 0.0;
  for (const auto& row : dense.rows) {
    REQUIRE(row.ok);
    if (std::abs(*row.chi) > fine_peak) {
      fine_peak = std::abs(*row.chi);
      fine_w = row.value;
    }
  }
  // both tails of the dispersion curve peak symmetrically; the coarse maximum
  // must sit at one of the two refined extrema
  const double mirror = 2.0 - fine_w;
  CHECK(std::min(std::abs(w_peak - fine_w), std::abs(w_peak - mirror)) <= 0.002 + 1e-12);
  CHECK(peak <= fine_peak * (1.0 + 1e-12));
}

TEST_CASE("weak-field frequency scan follows the sum-over-states curve") {
  auto spec = base_spec(ScanVariable::frequency, 0.2, 0.8, 13, 1e-5);
  spec.n_report = 1;
  for (const auto& row : run_scan(spec).rows) {
    REQUIRE(row.ok);
    const double sos = sos_polarizability(spec.model, 1, row.value);
    CHECK(std::abs(*row.chi - sos) <= 1e-3 * std::abs(sos));
  }
}

TEST_CASE("fit_susceptibilities: exact model classes") {
  const Eigen::VectorXd f = Eigen::VectorXd::LinSpaced(6, 0.01, 0.3);
  {
    const auto fit = fit_susceptibilities(f, 2.0 * f);
    CHECK(fit.alpha == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(std::abs(fit.gamma) < 1e-10);
    CHECK(fit.residual < 1e-12);
    CHECK_FALSE(fit.beta.has_value());
    CHECK(fit.amplitudes_used == f);
  }
  {
    const Eigen::VectorXd p = 2.0 * f.array() + 5.0 * f.array().cube();
    const auto fit = fit_susceptibilities(f, p);
    CHECK(std::abs(fit.alpha - 2.0) <= 1e-10);
    CHECK(std::abs(fit.gamma - 5.0) <= 1e-10);
  }
  {
    const Eigen::VectorXd p = 2.0 * f.array() - 3.0 * f.array().square() + 5.0 * f.array().cube();
    const auto fit = fit_susceptibilities(f, p, true);
    REQUIRE(fit.beta.has_value());
    CHECK(std::abs(*fit.beta + 3.0) <= 1e-9);
    CHECK(std::abs(fit.gamma - 5.0) <= 1e-8);
  }
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int i = 0; i < 20; ++i) {
    const double a = u(rng), g = u(rng);
    const Eigen::VectorXd p = a * f.array() + g * f.array().cube();
    const auto fit = fit_susceptibilities(f, p);
    CHECK(fit.residual >= 0.0);
    CHECK(fit.residual < 1e-12);
  }
}

TEST_CASE("fit_susceptibilities: error paths") {
  const Eigen::VectorXd three = Eigen::VectorXd::LinSpaced(3, 0.1, 0.3);
  CHECK_THROWS_AS(fit_susceptibilities(three, three), PreconditionError);
  const Eigen::VectorXd same = Eigen::VectorXd::Constant(5, 0.1);
  CHECK_THROWS_AS(fit_susceptibilities(same, same), PreconditionError);
  const Eigen::VectorXd f = Eigen::VectorXd::LinSpaced(5, 0.1, 0.3);
  CHECK_THROWS_AS(fit_susceptibilities(f, Eigen::VectorXd::Ones(4)), PreconditionError);
}

TEST_CASE("weak-field fit recovers the sum-over-states polarizability") {
  const double omega = 0.9;
  const double radius = convergence_radius({1.0, omega, 1.0, 0.0});
  auto spec = base_spec(ScanVariable::amplitude, 0.05 * radius / 8, 0.05 * radius, 8, omega);
  spec.n_report = 1;
  const auto table = run_scan(spec);
  const auto fit = fit_susceptibilities(spec.grid(), column_p1(table));
  const double sos = sos_polarizability(spec.model, 1, omega);
  CHECK(std::abs(fit.alpha - sos) <= 0.01 * std::abs(sos));
}

TEST_CASE("odd-power fit breaks down past the convergence radius") {
  const double omega = 0.9;
  const double radius = convergence_radius({1.0, omega, 1.0, 0.0});
  auto residual = [&](double extent) {
    auto spec = base_spec(ScanVariable::amplitude, extent * radius / 8, extent * radius, 8, omega);
    spec.n_report = 1;
    const auto table = run_scan(spec);
    for (const auto& row : table.rows) {
      REQUIRE(row.ok);
      REQUIRE(std::isfinite(row.fourier(1)));
    }
    return fit_susceptibilities(spec.grid(), column_p1(table)).residual;
  };
  const double inside = residual(0.5), outside = residual(1.5);
  CHECK(outside >= 10.0 * inside);
}
