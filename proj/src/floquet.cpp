#include "floqpol/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "floqpol/error.hpp"
#include "floqpol/initcond.hpp"
#include "floqpol/polarization.hpp"

namespace floqpol {

Eigen::MatrixXd FloquetSolution::coefficient_block(Index j) const {
  Eigen::MatrixXd block(photon_blocks(), levels);
  for (int m = 0; m < photon_blocks(); ++m) {
    block.row(m) = vectors.col(j).segment(m * levels, levels).transpose();
  }
  return block;
}

bool FloquetSolution::is_representative(Index j) const {
  return std::find(representatives.begin(), representatives.end(), j) !=
         representatives.end();
}

FloquetMatrix build_floquet_matrix(const MolecularModel& model,
                                   const FieldConfig& field,
                                   const TruncationConfig& trunc) {
  field.validate();
  trunc.validate();
  const Index s = model.levels();
  const auto blocks = static_cast<std::size_t>(2 * trunc.n_max + 1);
  if (blocks * static_cast<std::size_t>(s) > trunc.dimension_cap) {
    std::ostringstream msg;
    msg << "Floquet dimension (2*" << trunc.n_max << "+1)*" << s
        << " exceeds cap " << trunc.dimension_cap;
    throw DimensionError(msg.str());
  }

  FloquetMatrix mat;
  mat.n_max = trunc.n_max;
  mat.levels = s;
  mat.omega = field.omega;
  mat.entries = Eigen::MatrixXd::Zero(static_cast<Index>(blocks) * s,
                                      static_cast<Index>(blocks) * s);
  const Eigen::MatrixXd coupling = -0.5 * field.amplitude * model.dipole;
  for (int n = -trunc.n_max; n <= trunc.n_max; ++n) {
    const Index base = mat.flat(n, 0);
    for (Index r = 0; r < s; ++r) {
      mat.entries(base + r, base + r) = model.energies(r) + n * field.omega;
    }
    if (n < trunc.n_max) {
      const Index next = mat.flat(n + 1, 0);
      mat.entries.block(base, next, s, s) = coupling;
      mat.entries.block(next, base, s, s) = coupling;
    }
  }
  return mat;
}

SymmetricEigensystem<double> diagonalize_symmetric(const Eigen::MatrixXd& mat) {
  if (mat.rows() != mat.cols()) throw ValidationError("matrix is not square");
  const double asym = (mat - mat.transpose()).cwiseAbs().maxCoeff();
  if (asym > defaults::kMatrixSymmetryTol) {
    std::ostringstream msg;
    msg << "matrix is not symmetric (max |A - A^T| = " << asym << ")";
    throw ValidationError(msg.str());
  }
  return jacobi_eigen(mat);
}

double fold_to_zone(double e, double omega) {
  if (!(omega > 0.0)) throw PreconditionError("fold_to_zone: omega must be > 0");
  double folded = e - omega * std::floor(e / omega + 0.5);
  if (folded >= 0.5 * omega) folded -= omega;
  if (folded < -0.5 * omega) folded += omega;
  return folded;
}

namespace {

// Overlap of C^i with C^j moved up by d photon blocks.
double shifted_overlap(const FloquetSolution& sol, Index i, Index j, int d) {
  const int blocks = sol.photon_blocks();
  const int span = blocks - std::abs(d);
  if (span <= 0) return 0.0;
  const Index len = static_cast<Index>(span) * sol.levels;
  const Index off_i = (d > 0 ? d : 0) * sol.levels;
  const Index off_j = (d > 0 ? 0 : -d) * sol.levels;
  return sol.vectors.col(i).segment(off_i, len).dot(
      sol.vectors.col(j).segment(off_j, len));
}

bool same_ladder(const FloquetSolution& sol, Index i, Index j) {
  if (i == j) return true;
  const double diff = sol.quasienergies(i) - sol.quasienergies(j);
  const double shift = std::round(diff / sol.omega);
  if (std::abs(diff - shift * sol.omega) > 1e-3 * sol.omega) return false;
  if (std::abs(shift) >= sol.photon_blocks()) return false;
  return std::abs(shifted_overlap(sol, i, j, static_cast<int>(shift))) > 0.5;
}

void fix_phases(Eigen::MatrixXd& vectors) {
  for (Index j = 0; j < vectors.cols(); ++j) {
    Index arg = 0;
    vectors.col(j).cwiseAbs().maxCoeff(&arg);
    if (vectors(arg, j) < 0.0) vectors.col(j) *= -1.0;
  }
}

void fill_weights(FloquetSolution& sol) {
  const Index dim = sol.dim();
  sol.central_weight.resize(dim);
  sol.dominant_state.assign(static_cast<std::size_t>(dim), 0);
  const Index center = sol.n_max * sol.levels;
  for (Index j = 0; j < dim; ++j) {
    sol.central_weight(j) =
        sol.vectors.col(j).segment(center, sol.levels).squaredNorm();
    Eigen::VectorXd per_state = Eigen::VectorXd::Zero(sol.levels);
    for (int m = 0; m < sol.photon_blocks(); ++m) {
      per_state += sol.vectors.col(j)
                       .segment(m * sol.levels, sol.levels)
                       .cwiseAbs2();
    }
    Index dom = 0;
    per_state.maxCoeff(&dom);
    sol.dominant_state[static_cast<std::size_t>(j)] = dom;
  }
}

FloquetSolution solve_fixed(const MolecularModel& model,
                            const FieldConfig& field,
                            const TruncationConfig& trunc) {
  const FloquetMatrix mat = build_floquet_matrix(model, field, trunc);
  auto eig = diagonalize_symmetric(mat.entries);

  FloquetSolution sol;
  sol.quasienergies = std::move(eig.values);
  sol.vectors = std::move(eig.vectors);
  sol.n_max = trunc.n_max;
  sol.levels = model.levels();
  sol.omega = field.omega;
  sol.amplitude = field.amplitude;
  fix_phases(sol.vectors);
  fill_weights(sol);

  auto selection = select_representatives(sol);
  sol.representatives = std::move(selection.indices);
  sol.ambiguous_assignment = selection.ambiguous;
  return sol;
}

double ground_state_p1(const FloquetSolution& sol, const MolecularModel& model) {
  const InitialExpansion init = expand_initial_state(sol, 1);
  return fourier_components(sol, init, model, 1)(1);
}

}  // namespace

RepresentativeSelection select_representatives(const FloquetSolution& partial) {
  FloquetSolution sol_view;  // weights may be missing on hand-built input
  const FloquetSolution* sol = &partial;
  if (partial.central_weight.size() != partial.dim() ||
      partial.dominant_state.size() != static_cast<std::size_t>(partial.dim())) {
    sol_view = partial;
    fill_weights(sol_view);
    sol = &sol_view;
  }

  const Index dim = sol->dim();
  const Index levels = sol->levels;
  std::vector<Index> order(static_cast<std::size_t>(dim));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return sol->central_weight(a) > sol->central_weight(b);
  });

  RepresentativeSelection out;
  out.indices.assign(static_cast<std::size_t>(levels), Index{-1});
  std::vector<Index> chosen;
  std::vector<Index> fallback;

  auto replica_of_chosen = [&](Index j) {
    return std::any_of(chosen.begin(), chosen.end(),
                       [&](Index c) { return same_ladder(*sol, c, j); });
  };

  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    if (static_cast<Index>(chosen.size()) == levels) break;
    const Index j = order[pos];
    if (replica_of_chosen(j)) continue;
    const Index s = sol->dominant_state[static_cast<std::size_t>(j)];
    auto& slot = out.indices[static_cast<std::size_t>(s)];
    if (slot != -1) {
      fallback.push_back(j);
      continue;
    }
    slot = j;
    chosen.push_back(j);

    // Weight tie with another unused ladder competing for the same state.
    const double w = sol->central_weight(j);
    for (std::size_t q = pos + 1; q < order.size(); ++q) {
      const Index other = order[q];
      if (w - sol->central_weight(other) > defaults::kWeightTieTol) break;
      if (sol->dominant_state[static_cast<std::size_t>(other)] == s &&
          !replica_of_chosen(other)) {
        out.ambiguous = true;
        break;
      }
    }
  }

  for (Index s = 0; s < levels; ++s) {
    auto& slot = out.indices[static_cast<std::size_t>(s)];
    if (slot != -1) continue;
    out.ambiguous = true;
    for (Index f : fallback) {
      if (!replica_of_chosen(f)) {
        slot = f;
        chosen.push_back(f);
        break;
      }
    }
    if (slot == -1) {
      throw Error("representative selection failed: fewer than " +
                  std::to_string(levels) + " distinct ladders found");
    }
  }
  return out;
}

FloquetSolution solve_floquet(const MolecularModel& model,
                              const FieldConfig& field,
                              const TruncationConfig& trunc) {
  trunc.validate();
  if (!trunc.auto_converge) return solve_fixed(model, field, trunc);

  TruncationConfig current = trunc;
  double previous = ground_state_p1(solve_fixed(model, field, current), model);
  double before_previous = previous;
  while (true) {
    const int next = 2 * current.n_max;
    const auto next_dim = static_cast<std::size_t>(2 * next + 1) *
                          static_cast<std::size_t>(model.levels());
    if (next > trunc.n_max_cap || next_dim > trunc.dimension_cap) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "truncation did not converge before n_max cap (n_max "
          << current.n_max << ", P1 " << before_previous << " -> " << previous
          << ", tol " << trunc.tol << ")";
      throw ConvergenceError(msg.str(), before_previous, previous);
    }
    current.n_max = next;
    FloquetSolution refined = solve_fixed(model, field, current);
    const double p1 = ground_state_p1(refined, model);
    if (std::abs(p1 - previous) < trunc.tol) return refined;
    before_previous = previous;
    previous = p1;
  }
}

}  // namespace floqpol
