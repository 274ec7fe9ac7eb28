#ifndef FLOQPOL_FLOQUET_HPP
#define FLOQPOL_FLOQUET_HPP

#include <vector>

#include <Eigen/Dense>

#include "floqpol/jacobi.hpp"
#include "floqpol/model.hpp"

namespace floqpol {

/// Truncated quasi-energy matrix in the extended space. Rows and columns run
/// over (photon n, state s) with flat index (n + n_max) * levels + s.
struct FloquetMatrix {
  int n_max = 0;
  Index levels = 0;
  double omega = 0.0;
  Eigen::MatrixXd entries;

  Index dim() const { return entries.rows(); }
  Index flat(int photon, Index state) const {
    return (photon + n_max) * levels + state;
  }
};

/// Quasienergies and real Floquet coefficients C_{ns}^j.
///
/// The steady state belonging to column j is
///   u_j(t) = sum_{n,s} C_{ns}^j exp(i n omega t) psi_s,
/// and Psi_j = exp(-i E_j t) u_j solves the driven Schroedinger equation.
/// Shifting C by one photon block up raises E_j by omega; such replicas form
/// a ladder and describe the same physical state.
struct FloquetSolution {
  Eigen::VectorXd quasienergies;  // ascending
  Eigen::MatrixXd vectors;        // column j is C^j, unit norm
  int n_max = 0;
  Index levels = 0;
  double omega = 0.0;
  double amplitude = 0.0;

  /// representatives[s] is the eigenindex chosen for physical state s.
  std::vector<Index> representatives;
  Eigen::VectorXd central_weight;     // sum_s (C_{0s}^j)^2
  std::vector<Index> dominant_state;  // argmax_s sum_n (C_{ns}^j)^2
  bool ambiguous_assignment = false;

  Index dim() const { return quasienergies.size(); }
  int photon_blocks() const { return 2 * n_max + 1; }
  double coefficient(int photon, Index state, Index j) const {
    return vectors((photon + n_max) * levels + state, j);
  }
  /// C^j reshaped as (photon block) x (state).
  Eigen::MatrixXd coefficient_block(Index j) const;
  bool is_representative(Index j) const;
};

FloquetMatrix build_floquet_matrix(const MolecularModel& model,
                                   const FieldConfig& field,
                                   const TruncationConfig& trunc);

/// Ascending eigenvalues and orthonormal eigenvectors; rejects input whose
/// asymmetry exceeds 1e-12.
SymmetricEigensystem<double> diagonalize_symmetric(const Eigen::MatrixXd& mat);

struct RepresentativeSelection {
  std::vector<Index> indices;  // one eigenindex per physical state
  bool ambiguous = false;
};

/// Picks one eigenvector per ladder. Candidates are visited by decreasing
/// central-block weight (ties to the lower eigenindex) and assigned to their
/// dominant state. A candidate that is a photon replica of an already chosen
/// one is skipped. States left open after the pass take the best remaining
/// candidates from unused ladders; that, or a weight tie inside a state,
/// raises the ambiguity flag.
RepresentativeSelection select_representatives(const FloquetSolution& partial);

/// Builds, diagonalizes, fixes phases (largest |C| positive) and selects
/// representatives. With trunc.auto_converge, n_max doubles until P_1 for the
/// ground state changes by less than trunc.tol.
FloquetSolution solve_floquet(const MolecularModel& model,
                              const FieldConfig& field,
                              const TruncationConfig& trunc);

/// e - m*omega folded into [-omega/2, omega/2).
double fold_to_zone(double e, double omega);

}  // namespace floqpol

#endif  // FLOQPOL_FLOQUET_HPP
