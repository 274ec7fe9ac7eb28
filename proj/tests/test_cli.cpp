#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>

#include "floqpol/cli.hpp"
#include "oracles.hpp"

using namespace floqpol;
using namespace floqpol::cli;
namespace ft = floqpol::testing;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = main_entry(args, out, err);
  return {code, out.str(), err.str()};
}

std::string two_level() { return ft::data_file("two_level.json").string(); }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("parse_args: solve and scan examples") {
  const auto solve = parse_args({"solve", "--model", "m.json", "--omega", "0.9", "--field", "0.05",
                                 "--nmax", "8", "--k", "1"});
  CHECK(solve.subcommand == Subcommand::solve);
  CHECK(solve.model_path == "m.json");
  CHECK(*solve.omega == 0.9);
  CHECK(*solve.amplitude == 0.05);
  CHECK(solve.truncation.n_max == 8);
  CHECK(solve.k == 1);
  CHECK(solve.format == OutputFormat::csv);

  const auto scan = parse_args({"scan", "--variable", "frequency", "--start", "0.8", "--stop", "1.2",
                                "--points", "201", "--field", "0.05", "--model", "m.json"});
  CHECK(scan.subcommand == Subcommand::scan);
  CHECK(scan.variable == ScanVariable::frequency);
  CHECK(scan.start == 0.8);
  CHECK(scan.stop == 1.2);
  CHECK(scan.points == 201);
  CHECK(*scan.amplitude == 0.05);

  const auto shorthand = parse_args({"scan", "--field-scan", "--start", "0", "--stop", "0.1",
                                     "--points", "5", "--omega", "0.9", "--model", "m.json"});
  CHECK(shorthand.variable == ScanVariable::amplitude);
}

TEST_CASE("parse_args: usage errors") {
  CHECK_THROWS_AS(parse_args({"solve", "--omega", "0.9"}), UsageError);
  CHECK_THROWS_AS(parse_args({"solve", "--model", "m.json", "--omega", "0.9", "--bogus"}), UsageError);
  CHECK_THROWS_AS(parse_args({"scan", "--omega-scan", "--field-scan", "--start", "0.8", "--stop", "1.2",
                              "--points", "3", "--field", "0.05", "--omega", "1", "--model", "m.json"}),
                  UsageError);
  CHECK_THROWS_AS(parse_args({"solve", "--model", "m.json", "--omega", "0.9", "--format", "xml"}),
                  UsageError);
  CHECK_THROWS_AS(parse_args({}), UsageError);
  CHECK_THROWS_AS(parse_args({"--help"}), HelpRequested);
}

TEST_CASE("FLOQPOL_WORKERS sets the default worker count") {
  ::setenv("FLOQPOL_WORKERS", "3", 1);
  const auto cfg = parse_args({"scan", "--field-scan", "--start", "0", "--stop", "0.1", "--points", "5",
                               "--omega", "0.9", "--model", "m.json"});
  CHECK(cfg.workers == 3u);
  const auto explicit_cfg = parse_args({"scan", "--field-scan", "--start", "0", "--stop", "0.1",
                                        "--points", "5", "--omega", "0.9", "--model", "m.json",
                                        "--workers", "2"});
  CHECK(explicit_cfg.workers == 2u);
  ::unsetenv("FLOQPOL_WORKERS");
  CHECK(parse_args({"scan", "--field-scan", "--start", "0", "--stop", "0.1", "--points", "5",
                    "--omega", "0.9", "--model", "m.json"}).workers == 1u);
}

TEST_CASE("exit codes") {
  CHECK(invoke({"solve", "--omega", "0.9"}).code == 2);
  CHECK(invoke({"--help"}).code == 0);
  CHECK(invoke({"solve", "--model", "/nonexistent/model.json", "--omega", "0.9"}).code == 1);
  const auto ok = invoke({"solve", "--model", two_level(), "--omega", "0.9", "--field", "0.05"});
  CHECK(ok.code == 0);
  CHECK(ok.out.rfind("j,E_j,folded_E_j,dominant_state,central_weight,is_representative\n", 0) == 0);
}

TEST_CASE("compare: converged PASS, under-truncated FAIL, zero field exact") {
  RunConfig cfg = parse_args({"compare", "--model", two_level(), "--omega", "0.9", "--field", "0.05"});
  const auto pass = run_compare(cfg);
  CHECK(pass.pass);
  CHECK(pass.max_abs_deviation <= 1e-5);
  CHECK(pass.tol == 1e-5);

  cfg = parse_args({"compare", "--model", two_level(), "--omega", "0.9", "--field", "0.3", "--nmax", "1"});
  const auto fail = run_compare(cfg);
  CHECK_FALSE(fail.pass);
  CHECK(fail.max_abs_deviation > 1e-5);
  const auto failed = invoke({"compare", "--model", two_level(), "--omega", "0.9", "--field", "0.3",
                              "--nmax", "1"});
  CHECK(failed.code == 1);
  CHECK(failed.out.find("FAIL") != std::string::npos);

  cfg = parse_args({"compare", "--model", two_level(), "--omega", "0.9", "--field", "0"});
  const auto zero = run_compare(cfg);
  CHECK(zero.pass);
  CHECK(zero.max_abs_deviation <= 1e-12);
}

TEST_CASE("every subcommand runs") {
  const std::string m = two_level();
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"fourier", "--model", m, "--omega", "0.9", "--field", "0.05", "--format", "json"},
           {"timeseries", "--model", m, "--omega", "0.9", "--field", "0.05", "--with-oracle", "--periods", "2"},
           {"propagate", "--model", m, "--omega", "0.9", "--field", "0.05", "--periods", "1", "--stride", "10"},
           {"analytic", "--omega", "0.9", "--field", "0.05", "--model", m},
           {"fit", "--model", m, "--omega", "0.9", "--start", "0.0005", "--stop", "0.005", "--points", "6"},
           {"scan", "--omega-scan", "--start", "0.8", "--stop", "1.2", "--points", "5", "--field", "0.05",
            "--model", m, "--quasienergies", "--format", "json"}}) {
    CAPTURE(args[0]);
    const auto r = invoke(args);
    CHECK(r.code == 0);
    CHECK_FALSE(r.out.empty());
  }
  const auto pole = invoke({"analytic", "--d12", "0.5", "--omega", "1.2", "--omega12", "1.0", "--field", "0.4"});
  CHECK(pole.code == 1);
  CHECK(pole.err.find("0.4") != std::string::npos);
}

TEST_CASE("fit reads a scan CSV") {
  const auto csv = ft::temp_path("scan.csv");
  REQUIRE(invoke({"scan", "--field-scan", "--start", "0", "--stop", "0.005", "--points", "8", "--omega",
                  "0.9", "--model", two_level(), "--out", csv.string()}).code == 0);
  const auto fit = invoke({"fit", "--input", csv.string(), "--format", "json"});
  CHECK(fit.code == 0);
  CHECK(fit.out.find("\"alpha\"") != std::string::npos);
  std::filesystem::remove(csv);
}

TEST_CASE("solve and scan outputs are byte-identical across runs") {
  const std::string m = ft::data_file("three_level.json").string();
  for (const std::string fmt : {"csv", "json"}) {
    const auto a = ft::temp_path("a." + fmt), b = ft::temp_path("b." + fmt);
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"solve", "--model", m, "--omega", "0.45", "--field", "0.1", "--format", fmt},
             {"scan", "--omega-scan", "--start", "0.3", "--stop", "1.2", "--points", "17", "--field", "0.1",
              "--model", m, "--workers", "3", "--format", fmt}}) {
      auto with_a = args, with_b = args;
      with_a.insert(with_a.end(), {"--out", a.string()});
      with_b.insert(with_b.end(), {"--out", b.string()});
      REQUIRE(invoke(with_a).code == 0);
      REQUIRE(invoke(with_b).code == 0);
      CHECK(slurp(a) == slurp(b));
      CHECK_FALSE(slurp(a).empty());
    }
    std::filesystem::remove(a);
    std::filesystem::remove(b);
  }
}
