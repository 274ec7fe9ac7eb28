#include "floqpol/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "floqpol/error.hpp"

namespace floqpol {

using json = nlohmann::json;

void FieldConfig::validate() const {
  if (!std::isfinite(omega) || omega <= 0.0) {
    throw ValidationError("field omega must be finite and > 0");
  }
  if (!std::isfinite(amplitude) || amplitude < 0.0) {
    throw ValidationError("field amplitude must be finite and >= 0");
  }
}

void TruncationConfig::validate() const {
  if (n_max < 1) throw ValidationError("n_max must be >= 1");
  if (!(tol > 0.0)) throw ValidationError("convergence tolerance must be > 0");
  if (n_max_cap < n_max) throw ValidationError("n_max_cap must be >= n_max");
}

MolecularModel make_model(std::string name, Eigen::VectorXd energies,
                          Eigen::MatrixXd dipole) {
  const Index s = energies.size();
  if (s < 2) throw ValidationError("model needs at least 2 levels");
  if (dipole.rows() != s || dipole.cols() != s) {
    throw ValidationError("dipole must be " + std::to_string(s) + "x" +
                          std::to_string(s));
  }
  if (!energies.allFinite() || !dipole.allFinite()) {
    throw ValidationError("model contains non-finite entries");
  }
  for (Index r = 0; r < s; ++r) {
    for (Index c = r + 1; c < s; ++c) {
      const double diff = std::abs(dipole(r, c) - dipole(c, r));
      if (diff > defaults::kDipoleSymmetryTol) {
        std::ostringstream msg;
        msg << "dipole not symmetric at (" << r + 1 << "," << c + 1
            << "): |D_rs - D_sr| = " << diff;
        throw ValidationError(msg.str());
      }
      if (diff != 0.0) {
        const double mean = 0.5 * (dipole(r, c) + dipole(c, r));
        dipole(r, c) = dipole(c, r) = mean;
      }
    }
  }

  std::vector<Index> order(static_cast<std::size_t>(s));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return energies(a) < energies(b);
  });

  MolecularModel model;
  model.name = std::move(name);
  model.energies.resize(s);
  model.dipole.resize(s, s);
  for (Index r = 0; r < s; ++r) {
    model.energies(r) = energies(order[r]);
    for (Index c = 0; c < s; ++c) {
      model.dipole(r, c) = dipole(order[r], order[c]);
    }
  }
  return model;
}

MolecularModel parse_model(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("model file: ") + e.what());
  }
  try {
    const std::string name = doc.value("name", std::string{});
    const auto energies = doc.at("energies").get<std::vector<double>>();
    const auto rows = doc.at("dipole").get<std::vector<std::vector<double>>>();

    Eigen::VectorXd e =
        Eigen::Map<const Eigen::VectorXd>(energies.data(),
                                          static_cast<Index>(energies.size()));
    Eigen::MatrixXd d(static_cast<Index>(rows.size()),
                      static_cast<Index>(rows.empty() ? 0 : rows[0].size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (static_cast<Index>(rows[r].size()) != d.cols()) {
        throw ParseError("model file: dipole rows have unequal length");
      }
      for (std::size_t c = 0; c < rows[r].size(); ++c) {
        d(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
      }
    }
    return make_model(name, std::move(e), std::move(d));
  } catch (const json::exception& e) {
    throw ParseError(std::string("model file: ") + e.what());
  }
}

MolecularModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_model(buffer.str());
}

std::string model_to_json(const MolecularModel& model) {
  json doc;
  doc["name"] = model.name;
  doc["energies"] = std::vector<double>(
      model.energies.data(), model.energies.data() + model.energies.size());
  json rows = json::array();
  for (Index r = 0; r < model.levels(); ++r) {
    json row = json::array();
    for (Index c = 0; c < model.levels(); ++c) row.push_back(model.dipole(r, c));
    rows.push_back(std::move(row));
  }
  doc["dipole"] = std::move(rows);
  return doc.dump(2) + "\n";
}

void save_model(const MolecularModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write model file " + path.string());
  out << model_to_json(model);
}

MolecularModel two_level_model(double omega12, double d12, double d11,
                               double d22) {
  if (!(omega12 > 0.0)) {
    throw PreconditionError("two_level_model: omega12 must be > 0");
  }
  Eigen::Vector2d e(0.0, omega12);
  Eigen::Matrix2d d;
  d << d11, d12, d12, d22;
  return make_model("two-level", e, d);
}

}  // namespace floqpol
