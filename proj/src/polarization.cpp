#include "floqpol/polarization.hpp"

#include <cmath>

#include "floqpol/error.hpp"

namespace floqpol {

namespace {

// G(d) = sum_m sum_{s,r} C^a_{m,s} D_sr C^b_{m+d,r}, d = -(P-1) ... P-1,
// stored at offset d + P - 1.
Eigen::VectorXd shift_correlation(const Eigen::MatrixXd& block_a,
                                  const Eigen::MatrixXd& dipole_block_b) {
  const Index p = block_a.rows();
  Eigen::VectorXd g = Eigen::VectorXd::Zero(2 * p - 1);
  for (Index d = -(p - 1); d <= p - 1; ++d) {
    const Index lo = std::max<Index>(0, -d);
    const Index hi = std::min<Index>(p, p - d);
    if (hi <= lo) continue;
    g(d + p - 1) = block_a.middleRows(lo, hi - lo)
                       .cwiseProduct(dipole_block_b.middleRows(lo + d, hi - lo))
                       .sum();
  }
  return g;
}

Eigen::VectorXd fourier_from_correlation(const Eigen::VectorXd& g, Index p,
                                         int n_report) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n_report + 1);
  for (int n = 0; n <= n_report && n < p; ++n) {
    out(n) = (n == 0 ? 1.0 : 2.0) * g(n + p - 1);
  }
  return out;
}

void check_aligned(const FloquetSolution& solution, const InitialExpansion& init) {
  if (init.A.size() != solution.levels ||
      static_cast<Index>(solution.representatives.size()) != solution.levels) {
    throw PreconditionError("initial expansion does not match solution");
  }
}

}  // namespace

std::vector<DipoleLine> dipole_lines(const FloquetSolution& solution,
                                     const InitialExpansion& init,
                                     const MolecularModel& model) {
  check_aligned(solution, init);
  const Index s = solution.levels;
  const Index p = solution.photon_blocks();
  std::vector<Eigen::MatrixXd> blocks, dipole_blocks;
  for (Index i = 0; i < s; ++i) {
    blocks.push_back(solution.coefficient_block(
        solution.representatives[static_cast<std::size_t>(i)]));
    dipole_blocks.push_back(blocks.back() * model.dipole);
  }

  std::vector<DipoleLine> lines;
  for (Index i = 0; i < s; ++i) {
    for (Index j = i; j < s; ++j) {
      const double weight = init.A(i) * init.A(j);
      if (weight == 0.0) continue;
      const Eigen::VectorXd g = shift_correlation(
          blocks[static_cast<std::size_t>(i)], dipole_blocks[static_cast<std::size_t>(j)]);
      const double gap =
          solution.quasienergies(solution.representatives[static_cast<std::size_t>(i)]) -
          solution.quasienergies(solution.representatives[static_cast<std::size_t>(j)]);
      for (Index d = (i == j ? 0 : -(p - 1)); d <= p - 1; ++d) {
        const double value = g(d + p - 1);
        if (value == 0.0) continue;
        DipoleLine line;
        line.i = i;
        line.j = j;
        line.photon_shift = static_cast<int>(d);
        line.frequency = (i == j ? 0.0 : gap) + static_cast<double>(d) * solution.omega;
        line.amplitude = (i == j && d == 0 ? 1.0 : 2.0) * weight * value;
        lines.push_back(line);
      }
    }
  }
  return lines;
}

Eigen::VectorXd polarization_time_series(const FloquetSolution& solution,
                                         const InitialExpansion& init,
                                         const MolecularModel& model,
                                         const Eigen::VectorXd& times) {
  if (!times.allFinite()) throw PreconditionError("time grid must be finite");
  const auto lines = dipole_lines(solution, init, model);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(times.size());
  for (Index t = 0; t < times.size(); ++t) {
    double sum = 0.0;
    for (const auto& line : lines) {
      sum += line.amplitude * std::cos(line.frequency * times(t));
    }
    out(t) = sum;
  }
  return out;
}

Eigen::VectorXd state_fourier_components(const FloquetSolution& solution,
                                         const MolecularModel& model, Index j,
                                         int n_report) {
  if (n_report < 0) throw PreconditionError("n_report must be >= 0");
  const Eigen::MatrixXd block = solution.coefficient_block(j);
  const Eigen::VectorXd g = shift_correlation(block, block * model.dipole);
  return fourier_from_correlation(g, block.rows(), n_report);
}

Eigen::VectorXd fourier_components(const FloquetSolution& solution,
                                   const InitialExpansion& init,
                                   const MolecularModel& model, int n_report) {
  check_aligned(solution, init);
  if (n_report < 0) throw PreconditionError("n_report must be >= 0");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n_report + 1);
  for (Index i = 0; i < solution.levels; ++i) {
    const double weight = init.A(i) * init.A(i);
    if (weight == 0.0) continue;
    out += weight * state_fourier_components(
                        solution, model,
                        solution.representatives[static_cast<std::size_t>(i)],
                        n_report);
  }
  return out;
}

double periodic_part(const Eigen::VectorXd& fourier, double omega, double t) {
  double sum = 0.0;
  for (Index n = 0; n < fourier.size(); ++n) {
    sum += fourier(n) * std::cos(static_cast<double>(n) * omega * t);
  }
  return sum;
}

double periodic_part(const FloquetSolution& solution,
                     const InitialExpansion& init, const MolecularModel& model,
                     double t) {
  return periodic_part(
      fourier_components(solution, init, model, 2 * solution.n_max),
      solution.omega, t);
}

std::optional<double> susceptibility(double p1, double amplitude) {
  if (amplitude < 0.0) throw PreconditionError("amplitude must be >= 0");
  if (amplitude == 0.0) return std::nullopt;
  return p1 / amplitude;
}

std::vector<BeatTerm> beat_frequencies(const FloquetSolution& solution,
                                       const InitialExpansion& init) {
  check_aligned(solution, init);
  std::vector<BeatTerm> beats;
  for (Index i = 0; i < solution.levels; ++i) {
    for (Index j = i + 1; j < solution.levels; ++j) {
      const double weight = init.A(i) * init.A(j);
      if (std::abs(weight) <= defaults::kBeatAmplitudeFloor) continue;
      BeatTerm beat;
      beat.i = i;
      beat.j = j;
      beat.weight = weight;
      beat.frequency =
          solution.quasienergies(solution.representatives[static_cast<std::size_t>(j)]) -
          solution.quasienergies(solution.representatives[static_cast<std::size_t>(i)]);
      beats.push_back(beat);
    }
  }
  return beats;
}

PolarizationResult compute_polarization(const FloquetSolution& solution,
                                        const InitialExpansion& init,
                                        const MolecularModel& model,
                                        int n_report,
                                        const Eigen::VectorXd& times) {
  if (n_report < 0) n_report = 2 * solution.n_max;
  PolarizationResult out;
  out.fourier = fourier_components(solution, init, model, n_report);
  if (n_report >= 1) out.chi = susceptibility(out.fourier(1), solution.amplitude);
  out.beats = beat_frequencies(solution, init);
  if (times.size() > 0) {
    out.times = times;
    out.time_series = polarization_time_series(solution, init, model, times);
  }
  return out;
}

}  // namespace floqpol
