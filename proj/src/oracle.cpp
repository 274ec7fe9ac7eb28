#include "floqpol/oracle.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "floqpol/error.hpp"

namespace floqpol {

PropagationResult propagate(const MolecularModel& model, const FieldConfig& field,
                            Index k, double t_end, double dt,
                            const PropagationOptions& options) {
  field.validate();
  if (k < 1 || k > model.levels()) throw PreconditionError("initial state k out of range");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw PreconditionError("dt must be > 0");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw PreconditionError("t_end must be >= 0");
  if (options.stride < 1) throw PreconditionError("stride must be >= 1");

  const double period = 2.0 * std::numbers::pi / field.omega;
  const double max_dt = period / defaults::kStepsPerPeriod;
  const auto steps = static_cast<Index>(std::ceil(t_end / dt * (1.0 - 1e-12)));
  const double h = steps > 0 ? t_end / static_cast<double>(steps) : dt;

  PropagationResult out;
  out.dt = h;
  if (h > max_dt * (1.0 + 1e-12)) {
    if (!options.allow_coarse_step) {
      std::ostringstream msg;
      msg << "dt = " << h << " exceeds (2 pi / omega) / "
          << defaults::kStepsPerPeriod << " = " << max_dt;
      throw StepSizeError(msg.str());
    }
    out.coarse_step = true;
  }

  using Complex = std::complex<double>;
  const Index s = model.levels();
  // interaction picture of diag(e): c = exp(-i e t) b, so b is constant at F = 0
  const Eigen::VectorXd shifted = model.energies.array() - model.energies(k - 1);
  const Eigen::MatrixXcd coupling = (field.amplitude * model.dipole).cast<Complex>();

  auto phases = [&](double t) {
    Eigen::VectorXcd p(s);
    for (Index i = 0; i < s; ++i) p(i) = std::polar(1.0, shifted(i) * t);
    return p;
  };
  // db/dt = i F cos(omega t) exp(i e t) D exp(-i e t) b
  auto rhs = [&](double t, const Eigen::VectorXcd& b) -> Eigen::VectorXcd {
    const Eigen::VectorXcd p = phases(t);
    const Eigen::VectorXcd rotated = p.conjugate().cwiseProduct(b);
    return Complex(0.0, std::cos(field.omega * t)) * p.cwiseProduct(coupling * rotated);
  };

  const Index stored = steps / options.stride + 1 +
                       (steps % options.stride != 0 ? 1 : 0);
  out.times.resize(stored);
  out.amplitudes.resize(s, stored);

  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(s);
  b(k - 1) = 1.0;
  Index slot = 0;
  auto store = [&](double t) {
    out.times(slot) = t;
    for (Index i = 0; i < s; ++i) {
      out.amplitudes(i, slot) = std::polar(1.0, -model.energies(i) * t) * b(i);
    }
    ++slot;
  };
  store(0.0);

  for (Index step = 0; step < steps; ++step) {
    const double t = static_cast<double>(step) * h;
    const Eigen::VectorXcd k1 = rhs(t, b);
    const Eigen::VectorXcd k2 = rhs(t + 0.5 * h, b + 0.5 * h * k1);
    const Eigen::VectorXcd k3 = rhs(t + 0.5 * h, b + 0.5 * h * k2);
    const Eigen::VectorXcd k4 = rhs(t + h, b + h * k3);
    Eigen::VectorXcd next = b + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!next.allFinite()) {
      throw PropagationError("non-finite amplitudes after t = " + std::to_string(t), t);
    }
    b = std::move(next);
    out.norm_drift = std::max(out.norm_drift, std::abs(b.squaredNorm() - 1.0));
    const Index done = step + 1;
    if (done % options.stride == 0 || done == steps) {
      store(static_cast<double>(done) * h);
    }
  }
  return out;
}

Eigen::VectorXd dipole_of(const PropagationResult& result,
                          const MolecularModel& model) {
  Eigen::VectorXd p(result.amplitudes.cols());
  for (Index t = 0; t < p.size(); ++t) {
    const Eigen::VectorXcd c = result.amplitudes.col(t);
    p(t) = c.dot(model.dipole.cast<std::complex<double>>() * c).real();
  }
  return p;
}

double fourier_of_series(const Eigen::VectorXd& times,
                         const Eigen::VectorXd& values, double omega, int n) {
  if (times.size() != values.size() || times.size() < 2) {
    throw PreconditionError("fourier_of_series: need matching series of length >= 2");
  }
  if (!(omega > 0.0) || n < 0) throw PreconditionError("fourier_of_series: bad omega or n");
  const Index m = times.size();
  const double step = times(1) - times(0);
  for (Index i = 1; i < m; ++i) {
    if (std::abs((times(i) - times(i - 1)) - step) > 1e-9 * std::abs(step)) {
      throw PreconditionError("fourier_of_series: time grid is not uniform");
    }
  }
  const double length = times(m - 1) - times(0);
  const double period = 2.0 * std::numbers::pi / omega;
  const double windows = std::round(length / period);
  if (windows < 1.0 ||
      std::abs(length - windows * period) > defaults::kWindowTol * std::max(1.0, length)) {
    throw PreconditionError("fourier_of_series: window is not an integer number of periods");
  }

  double integral = 0.0;
  for (Index i = 0; i < m; ++i) {
    const double weight = (i == 0 || i == m - 1) ? 0.5 : 1.0;
    integral += weight * values(i) * std::cos(n * omega * times(i));
  }
  integral *= step;
  return (n == 0 ? 1.0 : 2.0) * integral / length;
}

}  // namespace floqpol
