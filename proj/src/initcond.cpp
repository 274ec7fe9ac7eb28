#include "floqpol/initcond.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "floqpol/error.hpp"

namespace floqpol {

Eigen::MatrixXd build_B(const FloquetSolution& solution) {
  const Index s = solution.levels;
  if (static_cast<Index>(solution.representatives.size()) != s) {
    throw PreconditionError("build_B: representatives not selected");
  }
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(s, s);
  for (Index j = 0; j < s; ++j) {
    const Index rep = solution.representatives[static_cast<std::size_t>(j)];
    for (int m = 0; m < solution.photon_blocks(); ++m) {
      b.col(j) += solution.vectors.col(rep).segment(m * s, s);
    }
  }
  return b;
}

InitialExpansion solve_A(const Eigen::MatrixXd& B, Index k) {
  const Index s = B.rows();
  if (B.cols() != s || s == 0) throw PreconditionError("solve_A: B must be square");
  if (k < 1 || k > s) {
    throw PreconditionError("initial state k=" + std::to_string(k) +
                            " out of range 1.." + std::to_string(s));
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double smax = sigma(0);
  const double smin = sigma(s - 1);
  if (!(smax > defaults::kSingularAbs)) {
    throw SingularError("B matrix is singular (largest singular value " +
                        std::to_string(smax) + ")");
  }

  InitialExpansion out;
  out.k = k;
  out.b_condition = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  const Eigen::VectorXd target = Eigen::VectorXd::Unit(s, k - 1);

  if (out.b_condition <= defaults::kConditionLimit) {
    out.A = B.partialPivLu().solve(target);
  } else {
    const double cutoff = defaults::kPinvCutoffRel * smax;
    Eigen::VectorXd inv_sigma = Eigen::VectorXd::Zero(s);
    for (Index i = 0; i < s; ++i) {
      if (sigma(i) > cutoff) inv_sigma(i) = 1.0 / sigma(i);
    }
    out.A = svd.matrixV() * inv_sigma.asDiagonal() *
            (svd.matrixU().transpose() * target);
    out.degenerate = true;
  }
  if (!out.A.allFinite()) throw SingularError("B solve produced non-finite A");
  out.reconstruction_error = (B * out.A - target).norm();
  return out;
}

InitialExpansion expand_initial_state(const FloquetSolution& solution, Index k) {
  const Eigen::MatrixXd b = build_B(solution);
  try {
    return solve_A(b, k);
  } catch (const SingularError& e) {
    double closest = std::numeric_limits<double>::infinity();
    Index ci = 0, cj = 0;
    const auto& reps = solution.representatives;
    for (std::size_t i = 0; i < reps.size(); ++i) {
      for (std::size_t j = i + 1; j < reps.size(); ++j) {
        const double gap = std::abs(fold_to_zone(
            solution.quasienergies(reps[j]) - solution.quasienergies(reps[i]),
            solution.omega));
        if (gap < closest) {
          closest = gap;
          ci = static_cast<Index>(i);
          cj = static_cast<Index>(j);
        }
      }
    }
    std::ostringstream msg;
    msg.precision(17);
    msg << e.what() << "; nearest quasienergy degeneracy between states "
        << ci + 1 << " and " << cj + 1 << " (folded gap " << closest << ")";
    throw SingularError(msg.str());
  }
}

}  // namespace floqpol
