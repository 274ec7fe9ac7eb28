#include "floqpol/analytic.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "floqpol/error.hpp"

namespace floqpol {

double two_level_p1(const TwoLevelParams& p) {
  if (!(p.omega12 > 0.0)) throw PreconditionError("omega12 must be > 0");
  const double detuning = p.omega - p.omega12;
  const double coupling = p.d12 * p.amplitude;
  const double denominator = detuning * detuning - coupling * coupling;
  if (std::abs(denominator) <= defaults::kPoleTol) {
    const double critical = convergence_radius(p);
    std::ostringstream msg;
    msg.precision(12);
    msg << "two-level formula has a pole at F = " << critical;
    throw PoleError(msg.str(), critical);
  }
  return -p.d12 * detuning * p.amplitude / denominator;
}

double convergence_radius(const TwoLevelParams& p) {
  if (p.d12 == 0.0) return std::numeric_limits<double>::infinity();
  return std::abs((p.omega - p.omega12) / p.d12);
}

double sos_polarizability(const MolecularModel& model, Index k, double omega) {
  if (k < 1 || k > model.levels()) {
    throw PreconditionError("initial state k out of range");
  }
  const Index kk = k - 1;
  double alpha = 0.0;
  for (Index s = 0; s < model.levels(); ++s) {
    if (s == kk) continue;
    const double w = model.energies(s) - model.energies(kk);
    if (std::abs(std::abs(omega) - std::abs(w)) <= defaults::kResonanceTol) {
      std::ostringstream msg;
      msg << "omega = " << omega << " is resonant with transition " << k
          << " -> " << s + 1 << " (|e_s - e_k| = " << std::abs(w) << ")";
      throw ResonanceError(msg.str());
    }
    const double d = model.dipole(kk, s);
    alpha += 2.0 * d * d * w / (w * w - omega * omega);
  }
  return alpha;
}

}  // namespace floqpol
