#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "higgslab/report.hpp"
#include "higgslab/runner.hpp"

using namespace higgslab;

namespace {

const char* kEdConfig = R"(
# small exact-diagonalization sweep
[experiment]
kind = "ed_sweep"
output_dir = "OUTDIR"
seed = 42

[model]
sites = 3
beta = 1.0
rsq = 0.4      # inline comment
trunc = 1
formulation = "effective"

[grid]
eps0_list = [0.1, 0.5, 0.9]
)";

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string temp_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("higgslab_test_" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

ExperimentConfig config_with_outdir(const std::string& text, const std::string& outdir) {
  std::string patched = text;
  auto pos = patched.find("OUTDIR");
  REQUIRE(pos != std::string::npos);
  patched.replace(pos, 6, outdir);
  return ExperimentConfig::from_tree(ConfigTree::parse_string(patched));
}

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("values, tables, comments, arrays") {
    auto tree = ConfigTree::parse_string(kEdConfig);
    CHECK(tree.get_string("experiment.kind") == "ed_sweep");
    CHECK(tree.get_integer("experiment.seed") == 42);
    CHECK(tree.get_number("model.rsq") == doctest::Approx(0.4));
    CHECK(tree.get_number_list("grid.eps0_list").size() == 3);
  }
  SUBCASE("malformed line is reported with its number") {
    try {
      ConfigTree::parse_string("[model]\nbeta 1.0\n");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
  SUBCASE("unknown experiment kind is named") {
    try {
      ExperimentConfig::from_tree(
          ConfigTree::parse_string("[experiment]\nkind = \"bogus\"\n"));
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("experiment.kind") != std::string::npos);
    }
  }
  SUBCASE("empty grid is a named validation error") {
    const char* text = R"(
[experiment]
kind = "ed_sweep"
[grid]
eps0_list = []
)";
    try {
      ExperimentConfig::from_tree(ConfigTree::parse_string(text));
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("grid") != std::string::npos);
    }
  }
  SUBCASE("inf shot counts parse") {
    auto tree = ConfigTree::parse_string("[vqe]\nshots_list = [1e6, inf]\n");
    auto v = tree.get_number_list("vqe.shots_list");
    CHECK(v[0] == doctest::Approx(1e6));
    CHECK(std::isinf(v[1]));
  }
}

TEST_CASE("csv formatting") {
  CsvWriter csv({"a", "b"});
  csv.add_row({1.0 / 3.0, 2e-17});
  std::string s = csv.str();
  CHECK(s.rfind("a,b\n", 0) == 0);
  CHECK(s.find("0.33333333333333331") != std::string::npos);  // 17 significant digits
  CHECK_THROWS_AS(csv.add_row({1.0}), std::invalid_argument);
}

TEST_CASE("runner determinism and artifacts") {
  auto out1 = temp_dir("det1");
  auto out2 = temp_dir("det2");
  auto cfg1 = config_with_outdir(kEdConfig, out1);
  auto cfg2 = config_with_outdir(kEdConfig, out2);
  auto r1 = run_experiment(cfg1);
  auto r2 = run_experiment(cfg2);
  CHECK(r1.exit_code == 0);
  CHECK(read_file(out1 + "/ed_sweep.csv") == read_file(out2 + "/ed_sweep.csv"));
  // metadata sidecar exists next to every artifact and can re-run the job
  for (const auto& artifact : r1.artifacts) {
    std::string sidecar = read_file(artifact + ".meta.json");
    CHECK(sidecar.find("\"seed\": 42") != std::string::npos);
    CHECK(sidecar.find("ed_sweep") != std::string::npos);
  }
  std::string svg = read_file(out1 + "/ed_sweep.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  std::filesystem::remove_all(out1);
  std::filesystem::remove_all(out2);
}

TEST_CASE("verify reports the Fig. 3 shot budget as feasible") {
  const char* text = R"(
[experiment]
kind = "vqe_sweep"
output_dir = "unused"
seed = 7
[model]
sites = 4
n0 = 2
trunc = 5
rsq = 0.3
beta = 1.0
formulation = "hobm"
[grid]
eps0_start = 0.1
eps0_stop = 2.0
eps0_step = 0.1
[vqe]
max_evals = 1000
restarts = 15
layers = 3
shots_pre = 1e3
shots_post = 1e5
)";
  auto cfg = ExperimentConfig::from_tree(ConfigTree::parse_string(text));
  std::string report = verify_report(cfg);
  CHECK(report.find("feasible within 1e11 shots/day: yes") != std::string::npos);
  // predicted shots are of order 1e10
  auto pos = report.find("predicted shots over the sweep: ");
  REQUIRE(pos != std::string::npos);
  double shots = std::stod(report.substr(pos + 32));
  CHECK(shots > 1e9);
  CHECK(shots < 1e11);
}

TEST_CASE("verify flags beyond-desk-scale MPS configs") {
  const char* text = R"(
[experiment]
kind = "mps_sweep"
[model]
beta = 1.0
[grid]
eps0_list = [0.1]
[mps]
n_list = [100]
s_list = [2]
chi_list = [100]
)";
  auto cfg = ExperimentConfig::from_tree(ConfigTree::parse_string(text));
  std::string report = verify_report(cfg);
  CHECK(report.find("resource warning") != std::string::npos);
}
