#ifndef FLOQPOL_INITCOND_HPP
#define FLOQPOL_INITCOND_HPP

#include <Eigen/Dense>

#include "floqpol/floquet.hpp"

namespace floqpol {

/// Superposition Psi = sum_j A_j exp(-i E_j t) u_j matching psi_k at the
/// instant the field is switched on. A is aligned with
/// FloquetSolution::representatives.
struct InitialExpansion {
  Index k = 1;  // 1-based
  Eigen::VectorXd A;
  double b_condition = 1.0;
  double reconstruction_error = 0.0;  // ||B A - e_k||_2
  bool degenerate = false;            // pseudo-inverse path was taken
};

/// B(s, j) = sum_n C_{ns}^{rep(j)}, i.e. column j is u_j(t = 0) over psi_s.
Eigen::MatrixXd build_B(const FloquetSolution& solution);

/// Solves B A = e_k. Above condition number 1e8 a truncated pseudo-inverse
/// (cutoff 1e-12 * sigma_max) is used and the degenerate flag is raised.
InitialExpansion solve_A(const Eigen::MatrixXd& B, Index k);

/// build_B + solve_A; a singular B is reported with the closest pair of
/// representative quasienergies.
InitialExpansion expand_initial_state(const FloquetSolution& solution, Index k);

}  // namespace floqpol

#endif  // FLOQPOL_INITCOND_HPP
