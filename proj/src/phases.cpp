#include "higgslab/phases.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace higgslab {

PhasePrediction predict_jump(const ModelParams& p) {
  p.validate();
  PhasePrediction out;
  out.jump_eps0 = 0.5 + p.beta / (p.rsq * (p.sites - 1));
  out.pre_state.assign(p.sites, 0);
  out.post_state.assign(p.sites, 0);
  out.post_state.front() = -1;
  out.post_state.back() = +1;
  out.regime_advisory = p.rsq > 0.5;
  return out;
}

double limiting_efd(double eps0) {
  if (eps0 < 0.0 || eps0 >= 1.0)
    throw std::invalid_argument("limiting_efd: eps0 must lie in [0, 1)");
  return eps0 <= 0.5 ? eps0 : eps0 - 1.0;
}

double spectral_conjugation_deviation(const SparseOp& h_plus, const SparseOp& h_minus) {
  const ProductBasis& basis = *h_plus.basis();
  if (basis.kind() == ModeKind::fock)
    throw std::invalid_argument(
        "spectral_conjugation_deviation: symmetric charge window required");
  if (!(basis == *h_minus.basis()))
    throw std::invalid_argument("spectral_conjugation_deviation: basis mismatch");
  Eigen::SelfAdjointEigenSolver<MatrixXcd> ep(h_plus.dense(), Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> em(h_minus.dense(), Eigen::EigenvaluesOnly);
  return (ep.eigenvalues() - em.eigenvalues()).cwiseAbs().maxCoeff();
}

double charge_conjugation_check(const ModelParams& p) {
  ModelParams minus = p;
  minus.eps0 = -p.eps0;
  SparseOp hp = build_effective_hamiltonian(p);
  SparseOp hm = build_effective_hamiltonian(minus);
  return spectral_conjugation_deviation(hp, hm);
}

PeriodicityReport periodicity_probe(const std::vector<std::pair<double, double>>& curve,
                                    double period, double grid_tol) {
  PeriodicityReport rep;
  double sum = 0.0;
  for (const auto& [x, f] : curve) {
    for (const auto& [y, g] : curve) {
      if (std::abs(y - (x + period)) <= grid_tol) {
        double drift = std::abs(g - f);
        rep.max_drift = std::max(rep.max_drift, drift);
        sum += drift;
        ++rep.n_compared;
      }
    }
  }
  if (rep.n_compared > 0) rep.mean_drift = sum / rep.n_compared;
  return rep;
}

}  // namespace higgslab
