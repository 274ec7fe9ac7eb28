#ifndef FLOQPOL_ORACLE_HPP
#define FLOQPOL_ORACLE_HPP

#include <Eigen/Dense>

#include "floqpol/model.hpp"

namespace floqpol {

struct PropagationOptions {
  bool allow_coarse_step = false;  // accept dt > (2 pi / omega) / 200
  int stride = 1;                  // keep every stride-th step
};

/// Level amplitudes c(t) over the unperturbed states, one column per stored
/// time.
struct PropagationResult {
  Eigen::VectorXd times;
  Eigen::MatrixXcd amplitudes;
  double dt = 0.0;           // step actually used
  double norm_drift = 0.0;   // max_t | ||c(t)||^2 - 1 |
  bool coarse_step = false;  // step above the default bound was accepted
};

/// Fixed-step classical RK4 for i dc/dt = (diag(e) - F D cos(omega t)) c on
/// [0, t_end], c(0) = e_k (k is 1-based). The step is shrunk so that an integer
/// number of steps hits t_end exactly. The steps are taken in the interaction
/// picture of diag(e) and the phases exp(-i e_s t) restored on output, so the
/// F = 0 trajectory is exact and the step error scales with F.
PropagationResult propagate(const MolecularModel& model, const FieldConfig& field,
                            Index k, double t_end, double dt,
                            const PropagationOptions& options = {});

/// Re sum_{s,r} conj(c_s) D_sr c_r at every stored time.
Eigen::VectorXd dipole_of(const PropagationResult& result,
                          const MolecularModel& model);

/// (2 - delta_{n0}) / L * integral of values(t) cos(n omega t) over a uniform
/// grid covering an integer number of field periods (trapezoidal rule).
double fourier_of_series(const Eigen::VectorXd& times,
                         const Eigen::VectorXd& values, double omega, int n);

}  // namespace floqpol

#endif  // FLOQPOL_ORACLE_HPP
