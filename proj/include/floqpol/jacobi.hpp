#ifndef FLOQPOL_JACOBI_HPP
#define FLOQPOL_JACOBI_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Jacobi>

#include "floqpol/defaults.hpp"
#include "floqpol/error.hpp"

namespace floqpol {

template <typename Scalar>
struct SymmetricEigensystem {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Vector values;   // ascending
  Matrix vectors;  // column j belongs to values(j)
  int sweeps = 0;
};

/// Frobenius norm of the strictly off-diagonal part.
template <typename Derived>
typename Derived::Scalar off_diagonal_norm(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  Scalar sum(0);
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      if (r != c) sum += a(r, c) * a(r, c);
    }
  }
  return std::sqrt(sum);
}

/// Cyclic Jacobi diagonalization of a real symmetric matrix.
///
/// Sweeps the strict upper triangle row by row, annihilating each nonzero
/// element with a plane rotation, until the off-diagonal Frobenius norm drops
/// to rel_tol * ||A||_F. Eigenvalues are returned ascending; equal eigenvalues
/// keep their diagonal order, so the result is a deterministic function of the
/// input bits. Only the symmetric part of the input is read.
template <typename Derived>
SymmetricEigensystem<typename Derived::Scalar> jacobi_eigen(
    const Eigen::MatrixBase<Derived>& input,
    int max_sweeps = defaults::kJacobiMaxSweeps,
    typename Derived::Scalar rel_tol =
        typename Derived::Scalar(defaults::kJacobiOffDiagonalRel)) {
  using Scalar = typename Derived::Scalar;
  using Matrix = typename SymmetricEigensystem<Scalar>::Matrix;
  const Eigen::Index n = input.rows();

  Matrix a = input;
  Matrix v = Matrix::Identity(n, n);
  const Scalar threshold = rel_tol * a.norm();

  int sweep = 0;
  Scalar off = off_diagonal_norm(a);
  while (off > threshold) {
    if (sweep == max_sweeps) {
      std::ostringstream msg;
      msg << "Jacobi eigensolver did not converge in " << max_sweeps
          << " sweeps (off-diagonal norm " << off << ", ||A||_F " << a.norm()
          << ", dim " << n << ")";
      throw ConvergenceError(msg.str());
    }
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (a(p, q) == Scalar(0)) continue;
        Eigen::JacobiRotation<Scalar> rot;
        rot.makeJacobi(a, p, q);
        a.applyOnTheLeft(p, q, rot.adjoint());
        a.applyOnTheRight(p, q, rot);
        a(p, q) = a(q, p) = Scalar(0);
        v.applyOnTheRight(p, q, rot);
      }
    }
    ++sweep;
    off = off_diagonal_norm(a);
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    return a(x, x) < a(y, y);
  });

  SymmetricEigensystem<Scalar> result;
  result.values.resize(n);
  result.vectors.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    result.values(j) = a(order[j], order[j]);
    result.vectors.col(j) = v.col(order[j]);
  }
  result.sweeps = sweep;
  return result;
}

}  // namespace floqpol

#endif  // FLOQPOL_JACOBI_HPP
