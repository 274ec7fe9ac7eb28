#ifndef FLOQPOL_POLARIZATION_HPP
#define FLOQPOL_POLARIZATION_HPP

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "floqpol/floquet.hpp"
#include "floqpol/initcond.hpp"

namespace floqpol {

/// One cosine term amplitude * cos(frequency * t) of the induced dipole.
/// i, j index representatives (physical states); photon_shift is the relative
/// photon index d. Terms with i == j make up the periodic part.
struct DipoleLine {
  Index i = 0;
  Index j = 0;
  int photon_shift = 0;
  double frequency = 0.0;
  double amplitude = 0.0;
};

/// Non-periodic content: E_j - E_i for representative pairs that are both
/// populated (|A_i A_j| > 1e-10).
struct BeatTerm {
  Index i = 0;
  Index j = 0;
  double frequency = 0.0;
  double weight = 0.0;  // A_i A_j
};

struct PolarizationResult {
  Eigen::VectorXd fourier;    // P_{n omega}, n = 0 ... n_report
  std::optional<double> chi;  // P_1 / F, absent at F = 0
  std::vector<BeatTerm> beats;
  Eigen::VectorXd times;
  Eigen::VectorXd time_series;
};

/// Full expansion of <Psi(t)|D|Psi(t)> into real cosine lines. Each
/// (i, j, d) term is merged with its mirror (j, i, -d).
std::vector<DipoleLine> dipole_lines(const FloquetSolution& solution,
                                     const InitialExpansion& init,
                                     const MolecularModel& model);

Eigen::VectorXd polarization_time_series(const FloquetSolution& solution,
                                         const InitialExpansion& init,
                                         const MolecularModel& model,
                                         const Eigen::VectorXd& times);

/// Fourier components of <u_j|D|u_j> for a single eigenvector j.
Eigen::VectorXd state_fourier_components(const FloquetSolution& solution,
                                         const MolecularModel& model, Index j,
                                         int n_report);

/// P_{n omega} = sum_j A_j^2 (2 - delta_{n0}) sum_{m,s,r} D_sr C_{ms}^j
/// C_{m+n,r}^j over representatives j. Components beyond 2 n_max are zero.
Eigen::VectorXd fourier_components(const FloquetSolution& solution,
                                   const InitialExpansion& init,
                                   const MolecularModel& model, int n_report);

/// sum_n P_{n omega} cos(n omega t).
double periodic_part(const FloquetSolution& solution,
                     const InitialExpansion& init, const MolecularModel& model,
                     double t);
double periodic_part(const Eigen::VectorXd& fourier, double omega, double t);

/// P_1 / F; empty for F == 0.
std::optional<double> susceptibility(double p1, double amplitude);

std::vector<BeatTerm> beat_frequencies(const FloquetSolution& solution,
                                       const InitialExpansion& init);

/// n_report < 0 selects 2 n_max.
PolarizationResult compute_polarization(const FloquetSolution& solution,
                                        const InitialExpansion& init,
                                        const MolecularModel& model,
                                        int n_report = -1,
                                        const Eigen::VectorXd& times = {});

}  // namespace floqpol

#endif  // FLOQPOL_POLARIZATION_HPP
