#ifndef FLOQPOL_MODEL_HPP
#define FLOQPOL_MODEL_HPP

#include <filesystem>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "floqpol/defaults.hpp"

namespace floqpol {

using Eigen::Index;

/// Few-level molecule: level energies (hartree, ascending) and the projection
/// of the dipole operator on the field axis (e*a0, symmetric).
struct MolecularModel {
  std::string name;
  Eigen::VectorXd energies;
  Eigen::MatrixXd dipole;

  Index levels() const { return energies.size(); }
};

/// Monochromatic field F cos(omega t), atomic units.
struct FieldConfig {
  double amplitude = 0.0;
  double omega = 1.0;

  void validate() const;
};

/// Photon blocks n = -n_max ... n_max.
struct TruncationConfig {
  int n_max = defaults::kNmax;
  bool auto_converge = false;
  double tol = defaults::kConvergenceTol;
  int n_max_cap = defaults::kNmaxCap;
  std::size_t dimension_cap = defaults::kDimensionCap;

  void validate() const;
};

/// Validates and canonicalizes: dipole asymmetries up to 1e-12 are averaged
/// away, levels are stably sorted by energy with the dipole permuted to match.
MolecularModel make_model(std::string name, Eigen::VectorXd energies,
                          Eigen::MatrixXd dipole);

MolecularModel parse_model(std::string_view json_text);
MolecularModel load_model(const std::filesystem::path& path);

std::string model_to_json(const MolecularModel& model);
void save_model(const MolecularModel& model, const std::filesystem::path& path);

/// Levels [0, omega12] with dipole [[d11, d12], [d12, d22]].
MolecularModel two_level_model(double omega12, double d12, double d11 = 0.0,
                               double d22 = 0.0);

}  // namespace floqpol

#endif  // FLOQPOL_MODEL_HPP
