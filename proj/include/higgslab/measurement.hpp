#pragma once

#include <random>

#include "higgslab/model.hpp"

namespace higgslab {

/// Heterodyne signal moments of a state (vacuum amplifier noise folded in).
/// Entries are real; <S^dag S> sits on the vacuum noise floor of 1.
struct MomentVector {
  Eigen::VectorXd s1;    // <S_n^dag S_n>
  Eigen::VectorXd s2;    // <(S_n^dag)^2 S_n^2>
  Eigen::MatrixXd pair;  // <S_n^dag S_n S_m^dag S_m>, n != m (symmetric)
  Eigen::VectorXd hop;   // <S_n^dag S_{n+1} + S_n S_{n+1}^dag>, n = 0..N-2
};

MomentVector s_moments(const StateVector& psi);

/// Coefficients expressing <H_HOBM> through signal moments.
struct CostCoefficients {
  Eigen::VectorXd c1;     // on <S^dag S>_n
  Eigen::VectorXd c2;     // on <(S^dag)^2 S^2>_n
  Eigen::MatrixXd cpair;  // on pair moments, upper triangle j < n
  Eigen::VectorXd chop;   // on hop moments
  double constant = 0.0;
  int sites = 0;
  int n0 = 1;
};

CostCoefficients cost_coefficients(const ModelParams& p);
double cost_from_moments(const CostCoefficients& c, const MomentVector& m);

/// Single-shot estimator statistics, precompiled per parameter point.
/// F1 and F2 are the vacuum-noise contractions of the estimator f and f^2;
/// <F1> = <H_HOBM> and Var(f) = <F2> - <F1>^2 exactly (no truncation of
/// the noise algebra involved).
class EnergyEstimator {
 public:
  EnergyEstimator(const ModelParams& p, int d);
  EnergyEstimator(const CostCoefficients& c, BasisPtr basis);

  double mean(const StateVector& psi) const;
  double variance(const StateVector& psi) const;
  const SparseOp& f1() const { return f1_; }
  const SparseOp& f2() const { return f2_; }
  const BasisPtr& basis() const { return basis_; }

 private:
  BasisPtr basis_;
  SparseOp f1_;
  SparseOp f2_;
};

/// Explicit reference route: the estimator as a polynomial in the
/// commuting normal operators S_n on system (x) vacuum-noise modes with
/// noise cutoff d_h; checked for stability under d_h -> d_h + 2 (1%).
double estimator_variance(const StateVector& psi, const ModelParams& p, int noise_cutoff);

/// Measurement repetitions per cost evaluation; infinity disables noise.
struct ShotModel {
  double shots = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 0;
};

/// Exact <H_HOBM> for infinite M, a Normal(<H>, sigma^2_H / M) draw
/// otherwise; deterministic under a fixed rng stream.
double noisy_cost(const StateVector& psi, const EnergyEstimator& est,
                  const ShotModel& shot, std::mt19937_64& rng);

struct ShotBudget {
  double total_shots = 0.0;
  double seconds = 0.0;
  bool feasible = false;
};

/// Shot accounting: shots = runs * evals * M, one shot lasts
/// gates_per_circuit * 1e-7 s, feasibility bound 1e11 shots per day.
ShotBudget shot_budget(double gates_per_circuit, double runs, double evals_per_run,
                       double M);

/// Monte-Carlo heterodyne oracle for separable states: samples outcomes
/// S_n from the per-mode Husimi distributions (exact rejection sampler).
class HeterodyneSimulator {
 public:
  explicit HeterodyneSimulator(std::vector<VectorXcd> mode_amplitudes);
  std::vector<Complex> sample_shot(std::mt19937_64& rng) const;

 private:
  std::vector<VectorXcd> modes_;
  std::vector<std::vector<double>> weights_;
};

/// Value of the single-shot estimator on a set of heterodyne outcomes.
double estimator_shot_value(const CostCoefficients& c, const std::vector<Complex>& s);

}  // namespace higgslab
