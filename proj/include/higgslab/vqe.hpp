#pragma once

#include <functional>

#include "higgslab/circuit.hpp"
#include "higgslab/exact.hpp"
#include "higgslab/measurement.hpp"

namespace higgslab {

enum class OptimizerKind { mads, nelder_mead, spsa };
enum class InitStrategy { zeros, uniform_random };

struct VqeConfig {
  OptimizerKind optimizer = OptimizerKind::mads;
  int max_evals = 1000;
  int restarts = 15;
  InitStrategy init = InitStrategy::uniform_random;
  double theta_range = 0.5;  // theta ~ U(-theta_range, theta_range)
  double omega_range = 1.0;  // Omega ~ U(-omega_range, omega_range)
  ShotModel shot;
  std::uint64_t seed = 1;
  int layers = 3;  // C14 N_l
  double mesh_init = 0.25;
  double mesh_tol = 1e-6;
};

struct EvalRecord {
  int eval = 0;
  std::vector<double> params;
  double cost = 0.0;
  double best = 0.0;  // running best sample, non-increasing
};

struct RunTrace {
  std::vector<EvalRecord> evals;
  std::vector<double> final_params;  // incumbent at termination
  double final_cost = 0.0;           // noisy cost at the incumbent
  double best_cost = 0.0;            // minimum recorded sample
  // Filled by the VQE driver:
  double final_energy = std::numeric_limits<double>::quiet_NaN();
  double fidelity = std::numeric_limits<double>::quiet_NaN();
  double final_efd = std::numeric_limits<double>::quiet_NaN();
  bool success = false;
};

using CostFn = std::function<double(const std::vector<double>&)>;

/// Derivative-free minimization with the configured optimizer. NaN costs
/// are discarded but count against the budget.
RunTrace optimize(const CostFn& cost, std::vector<double> x0, const VqeConfig& cfg,
                  std::mt19937_64& rng);

/// Convenience overload generating x0 from cfg.init with theta_range.
RunTrace optimize(const CostFn& cost, int dim, const VqeConfig& cfg,
                  std::mt19937_64& rng);

struct VqePointResult {
  double eps0 = 0.0;
  // post-selected run (lowest noisy final cost among restarts)
  double efd = 0.0;
  double energy = 0.0;
  double fidelity = std::numeric_limits<double>::quiet_NaN();
  int selected_run = -1;
  // statistics over successful runs (final energy below the mid-gap line)
  double efd_mean = 0.0;
  double efd_std = 0.0;
  int n_success = 0;
  double evals_per_run = 0.0;
  double e0 = std::numeric_limits<double>::quiet_NaN();
  double e1 = std::numeric_limits<double>::quiet_NaN();
  bool ed_available = false;
  std::vector<RunTrace> runs;
};

/// Full VQE at one parameter point: cfg.restarts independent
/// optimizations from |N0...N0>, post-selection by lowest noisy final
/// cost, EFD via <Q_n> = <N_n> - N0, fidelity against the
/// zero-charge-sector ED ground state.
VqePointResult run_vqe_point(const ModelParams& p, const AnsatzSpec& ansatz,
                             const VqeConfig& cfg);

struct BlockwiseResult {
  double eps0 = 0.0;
  double efd = 0.0;
  double energy = 0.0;
  double fidelity = std::numeric_limits<double>::quiet_NaN();
  double e0 = std::numeric_limits<double>::quiet_NaN();
  double e1 = std::numeric_limits<double>::quiet_NaN();
  bool ed_available = false;
  long total_evals = 0;
  std::vector<std::vector<double>> block_thetas;  // frozen per block
  std::vector<double> omega;                      // frozen after block 1
};

/// Block-wise protocol from |N0-1, N0, ..., N0, N0+1>: optimize block 1
/// (theta and Omega), freeze it, then append and optimize each further
/// block (theta only).
BlockwiseResult run_blockwise_vqe(const ModelParams& p, const BlockSpec& spec,
                                  const VqeConfig& cfg);

}  // namespace higgslab
