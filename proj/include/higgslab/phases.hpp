#pragma once

#include "higgslab/model.hpp"

namespace higgslab {

/// Analytic location of the first level crossing in the large-mass
/// regime, with the competing charge configurations.
struct PhasePrediction {
  double jump_eps0 = 0.0;
  std::vector<int> pre_state;   // all charges zero
  std::vector<int> post_state;  // boundary charge pair
  bool regime_advisory = false;  // R^2 above the trusted large-mass window
};

/// eps0' = 1/2 + beta / (R^2 (N-1)); advisory flag when R^2 > 0.5.
PhasePrediction predict_jump(const ModelParams& p);

/// Large-mass EFD branches: eps0 for eps0 <= 1/2, eps0 - 1 above.
double limiting_efd(double eps0);

/// Max absolute difference between the sorted spectra of H_eff(eps0) and
/// H_eff(-eps0); exact charge-conjugation symmetry of the symmetric
/// truncation makes this vanish.
double charge_conjugation_check(const ModelParams& p);

/// Spectral deviation between two operators under Q -> -Q; refuses bases
/// without a symmetric charge window.
double spectral_conjugation_deviation(const SparseOp& h_plus, const SparseOp& h_minus);

struct PeriodicityReport {
  double max_drift = 0.0;
  double mean_drift = 0.0;
  int n_compared = 0;
};

/// Drift |F(eps0 + period) - F(eps0)| over a sampled curve; finite-size
/// drift is physical and only reported, never asserted.
PeriodicityReport periodicity_probe(const std::vector<std::pair<double, double>>& curve,
                                    double period = 1.0, double grid_tol = 1e-9);

}  // namespace higgslab
