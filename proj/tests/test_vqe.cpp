#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "higgslab/rng.hpp"
#include "higgslab/vqe.hpp"

using namespace higgslab;

TEST_CASE("optimizer on a quadratic bowl") {
  std::vector<double> x_star{0.3, -0.2, 0.15, 0.4, -0.35, 0.05};
  CostFn bowl = [&](const std::vector<double>& x) {
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += (x[i] - x_star[i]) * (x[i] - x_star[i]);
    return s;
  };
  for (auto kind : {OptimizerKind::mads, OptimizerKind::nelder_mead}) {
    VqeConfig cfg;
    cfg.optimizer = kind;
    cfg.max_evals = 500;
    auto rng = make_rng(1);
    auto trace = optimize(bowl, 6, cfg, rng);
    double dist = 0.0;
    for (int i = 0; i < 6; ++i)
      dist += std::pow(trace.final_params[i] - x_star[i], 2);
    CHECK(std::sqrt(dist) < 1e-3);
    CHECK(static_cast<int>(trace.evals.size()) <= cfg.max_evals);
  }
}

TEST_CASE("optimizer on a noisy bowl") {
  const double sigma = 0.1;
  double sum_true = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto noise_rng = make_rng(100 + seed);
    std::normal_distribution<double> g(0.0, sigma);
    CostFn bowl = [&](const std::vector<double>& x) {
      double s = 0.0;
      for (double v : x) s += v * v;
      return s + g(noise_rng);
    };
    VqeConfig cfg;
    cfg.max_evals = 800;
    auto rng = make_rng(seed);
    cfg.init = InitStrategy::uniform_random;
    cfg.theta_range = 0.5;
    auto trace = optimize(bowl, 4, cfg, rng);
    double true_val = 0.0;
    for (double v : trace.final_params) true_val += v * v;
    sum_true += true_val;
  }
  CHECK(sum_true / 10.0 < 0.05);
}

TEST_CASE("budget and NaN handling") {
  int calls = 0;
  CostFn f = [&](const std::vector<double>& x) {
    ++calls;
    if (calls % 7 == 3) return std::numeric_limits<double>::quiet_NaN();
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
  };
  VqeConfig cfg;
  cfg.max_evals = 200;
  auto rng = make_rng(9);
  auto trace = optimize(f, 5, cfg, rng);
  CHECK(calls <= cfg.max_evals);
  CHECK(static_cast<int>(trace.evals.size()) == calls);
  // running best ignores the NaN samples and never increases
  for (size_t i = 1; i < trace.evals.size(); ++i)
    CHECK(trace.evals[i].best <= trace.evals[i - 1].best + 1e-15);
}

TEST_CASE("spsa reduces a noisy quadratic") {
  auto noise_rng = make_rng(55);
  std::normal_distribution<double> g(0.0, 0.05);
  CostFn bowl = [&](const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s + g(noise_rng);
  };
  VqeConfig cfg;
  cfg.optimizer = OptimizerKind::spsa;
  cfg.max_evals = 600;
  cfg.init = InitStrategy::uniform_random;
  auto rng = make_rng(2);
  auto trace = optimize(bowl, 4, cfg, rng);
  double true_val = 0.0;
  for (double v : trace.final_params) true_val += v * v;
  CHECK(true_val < 0.1);
}

TEST_CASE("vqe point on a small model") {
  ModelParams p;
  p.sites = 2;
  p.n0 = 1;
  p.trunc = 3;
  p.rsq = 0.5;
  p.beta = 1.0;
  p.eps0 = 0.2;

  VqeConfig cfg;
  cfg.max_evals = 300;
  cfg.restarts = 3;
  cfg.seed = 12;
  cfg.layers = 2;

  auto ansatz = AnsatzSpec::generic_pair(0, 1, cfg.layers);

  SUBCASE("noiseless run converges into the gap and is reproducible") {
    auto res = run_vqe_point(p, ansatz, cfg);
    REQUIRE(res.ed_available);
    CHECK(res.energy >= res.e0 - 1e-9);  // variational bound
    CHECK(res.energy < res.e0 + 0.5 * (res.e1 - res.e0));
    CHECK(res.fidelity > 0.99);
    CHECK(res.evals_per_run <= cfg.max_evals);
    auto res2 = run_vqe_point(p, ansatz, cfg);
    CHECK(res.energy == res2.energy);
    CHECK(res.efd == res2.efd);
    // post-selection is the exact arg-min of final costs
    for (const auto& run : res.runs)
      CHECK(res.runs[res.selected_run].final_cost <= run.final_cost);
  }
  SUBCASE("noisy run stays reproducible under a fixed seed") {
    VqeConfig noisy = cfg;
    noisy.shot.shots = 1e4;
    auto a = run_vqe_point(p, ansatz, noisy);
    auto b = run_vqe_point(p, ansatz, noisy);
    CHECK(a.energy == b.energy);
    CHECK(a.runs[0].final_cost == b.runs[0].final_cost);
  }
}

TEST_CASE("blockwise vqe freezes earlier blocks") {
  ModelParams p;
  p.sites = 2;
  p.n0 = 1;
  p.trunc = 3;
  p.rsq = 1.0;
  p.beta = 1.0;
  p.eps0 = 0.3;

  BlockSpec spec;
  spec.n_blocks = 2;
  spec.layers_first = 1;
  spec.layers_rest = 1;

  VqeConfig cfg;
  cfg.max_evals = 200;
  cfg.restarts = 2;
  cfg.seed = 77;

  auto two = run_blockwise_vqe(p, spec, cfg);
  BlockSpec one = spec;
  one.n_blocks = 1;
  auto first_only = run_blockwise_vqe(p, one, cfg);
  REQUIRE(two.block_thetas.size() == 2);
  REQUIRE(first_only.block_thetas.size() == 1);
  for (size_t i = 0; i < first_only.block_thetas[0].size(); ++i)
    CHECK(two.block_thetas[0][i] == first_only.block_thetas[0][i]);
  CHECK(two.omega == first_only.omega);
  // appending an optimized block cannot worsen the post-selected energy
  CHECK(two.energy <= first_only.energy + 1e-9);
  REQUIRE(two.ed_available);
  CHECK(two.energy >= two.e0 - 1e-9);
}
