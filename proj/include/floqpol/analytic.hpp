#ifndef FLOQPOL_ANALYTIC_HPP
#define FLOQPOL_ANALYTIC_HPP

#include "floqpol/model.hpp"

namespace floqpol {

struct TwoLevelParams {
  double d12 = 1.0;
  double omega = 1.0;
  double omega12 = 1.0;
  double amplitude = 0.0;
};

/// Two-level estimate of the first harmonic,
///   -D12 (omega - omega12) F / ((omega - omega12)^2 - D12^2 F^2).
/// Throws PoleError at the critical amplitude |omega - omega12| / |D12|.
double two_level_p1(const TwoLevelParams& p);

/// |omega - omega12| / |D12|, the radius of convergence in F of the power
/// series of two_level_p1. Infinite when D12 == 0.
double convergence_radius(const TwoLevelParams& p);

/// Weak-field dynamic polarizability of level k (1-based):
///   sum_{s != k} 2 D_ks^2 w_sk / (w_sk^2 - omega^2),  w_sk = e_s - e_k.
double sos_polarizability(const MolecularModel& model, Index k, double omega);

}  // namespace floqpol

#endif  // FLOQPOL_ANALYTIC_HPP
