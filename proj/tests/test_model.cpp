#include <doctest.h>

#include <fstream>
#include <limits>

#include "floqpol/error.hpp"
#include "floqpol/model.hpp"
#include "oracles.hpp"

using namespace floqpol;
using floqpol::testing::temp_path;

namespace {

MolecularModel load_text(const std::string& text) {
  const auto path = temp_path("model.json");
  {
    std::ofstream out(path);
    out << text;
  }
  auto model = load_model(path);
  std::filesystem::remove(path);
  return model;
}

}  // namespace

TEST_CASE("load_model reads a two-level file") {
  const auto m = load_text(
      R"({"name": "x", "energies": [0.0, 0.1299], "dipole": [[1.0, 0.5], [0.5, 0.2]]})");
  CHECK(m.levels() == 2);
  CHECK(m.name == "x");
  CHECK(m.energies(1) == 0.1299);
  CHECK(m.dipole(0, 1) == 0.5);
  CHECK(m.dipole(1, 1) == 0.2);
}

TEST_CASE("load_model rejects an asymmetric dipole") {
  CHECK_THROWS_AS(load_text(R"({"energies": [0, 1], "dipole": [[0, 1], [0.9, 0]]})"),
                  ValidationError);
}

TEST_CASE("load_model reorders levels with a consistent dipole permutation") {
  const auto m = load_text(
      R"({"energies": [0.1, 0.0], "dipole": [[0.7, 0.3], [0.3, -0.4]]})");
  CHECK(m.energies(0) == 0.0);
  CHECK(m.energies(1) == 0.1);
  CHECK(m.dipole(0, 0) == -0.4);
  CHECK(m.dipole(1, 1) == 0.7);
  CHECK(m.dipole(0, 1) == 0.3);
}

TEST_CASE("load_model error paths") {
  CHECK_THROWS_AS(load_text("{ not json"), ParseError);
  CHECK_THROWS_AS(load_text(R"({"energies": [0, 1]})"), ParseError);
  CHECK_THROWS_AS(load_text(R"({"energies": [0, 1], "dipole": [[0, 1], [1]]})"), ParseError);
  CHECK_THROWS_AS(load_text(R"({"energies": [0], "dipole": [[0]]})"), ValidationError);
  CHECK_THROWS_AS(load_text(R"({"energies": [0, 1, 2], "dipole": [[0, 1], [1, 0]]})"),
                  ValidationError);
  CHECK_THROWS_AS(load_model(temp_path("does_not_exist.json")), ParseError);

  Eigen::Vector2d e(0.0, std::numeric_limits<double>::quiet_NaN());
  CHECK_THROWS_AS(make_model("nan", e, Eigen::Matrix2d::Zero()), ValidationError);
}

TEST_CASE("asymmetry below 1e-12 is averaged to an exactly symmetric matrix") {
  Eigen::Matrix2d d;
  d << 0.0, 1.0, 1.0 + 4e-13, 0.0;
  const auto m = make_model("near", Eigen::Vector2d(0, 1), d);
  CHECK(m.dipole(0, 1) == m.dipole(1, 0));
}

TEST_CASE("two_level_model") {
  auto a = two_level_model(1.0, 1.0, 0.0, 0.0);
  CHECK(a.energies == Eigen::Vector2d(0, 1));
  CHECK(a.dipole == (Eigen::Matrix2d() << 0, 1, 1, 0).finished());

  auto b = two_level_model(0.5, 0.2, 1.0, 0.3);
  CHECK(b.energies == Eigen::Vector2d(0, 0.5));
  CHECK(b.dipole == (Eigen::Matrix2d() << 1.0, 0.2, 0.2, 0.3).finished());

  CHECK_THROWS_AS(two_level_model(-1.0, 1.0, 0.0, 0.0), PreconditionError);
}

TEST_CASE("save/load round trip is bit-exact") {
  std::mt19937 rng(7);
  const auto path = temp_path("roundtrip.json");
  for (int trial = 0; trial < 25; ++trial) {
    const auto m = floqpol::testing::random_model(rng, 2 + trial % 5);
    save_model(m, path);
    const auto back = load_model(path);
    CHECK(back.name == m.name);
    CHECK(back.energies == m.energies);
    CHECK(back.dipole == m.dipole);
  }
  std::filesystem::remove(path);
}

TEST_CASE("level reordering preserves the dipole spectrum") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const Index s = 2 + trial % 4;
    Eigen::VectorXd e(s);
    Eigen::MatrixXd d(s, s);
    for (Index r = 0; r < s; ++r) {
      e(r) = u(rng);
      for (Index c = r; c < s; ++c) d(r, c) = d(c, r) = u(rng);
    }
    const auto m = make_model("p", e, d);
    for (Index r = 1; r < s; ++r) CHECK(m.energies(r - 1) <= m.energies(r));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> before(d), after(m.dipole);
    CHECK((before.eigenvalues() - after.eigenvalues()).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("shipped models load") {
  for (const char* name : {"two_level.json", "three_level.json", "lih_like.json"}) {
    CAPTURE(name);
    const auto m = load_model(floqpol::testing::data_file(name));
    CHECK(m.levels() >= 2);
  }
  CHECK(load_model(floqpol::testing::data_file("lih_like.json")).levels() == 4);
}

TEST_CASE("field and truncation validation") {
  CHECK_THROWS_AS((FieldConfig{0.1, 0.0}.validate()), ValidationError);
  CHECK_THROWS_AS((FieldConfig{-0.1, 1.0}.validate()), ValidationError);
  CHECK_NOTHROW((FieldConfig{0.0, 1.0}.validate()));
  TruncationConfig t;
  t.n_max = 0;
  CHECK_THROWS_AS(t.validate(), ValidationError);
  t.n_max = 2;
  t.tol = 0.0;
  CHECK_THROWS_AS(t.validate(), ValidationError);
}
