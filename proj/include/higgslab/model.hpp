#pragma once

#include "higgslab/hilbert.hpp"

namespace higgslab {

/// Physics knobs of the lattice Higgs model.
/// trunc is the per-mode truncation: charge window k, spin s, or fock
/// dimension d depending on which formulation a builder targets.
struct ModelParams {
  int sites = 4;       // N
  double beta = 1.0;   // 1/g^2
  double rsq = 0.3;    // R^2
  double eps0 = 0.0;   // background field
  double ell = 0.0;    // total-charge penalty weight
  int n0 = 2;          // HOBM offset
  int trunc = 2;

  void validate() const;
};

/// Basis with N charge modes interleaved with N-1 electric-field link
/// modes: site 1, link 1, site 2, ..., site N.
BasisPtr make_gauge_basis(int sites, int charge_window, int link_cutoff);

/// Eq.-(5)-type Hamiltonian on the interleaved charge/link basis. The link
/// lowering operator and the charge lowering operator act with unit
/// amplitude; hops that would leave a truncation window are dropped.
SparseOp build_full_gauge_hamiltonian(const ModelParams& p, int link_cutoff);

/// Gauss-law generators G_n = E_n - E_{n-1} - Q_n for n = 1..N-1 (E_0 = 0
/// at the open boundary; the last site carries no independent generator).
std::vector<SparseOp> gauss_generators(const ModelParams& p, int link_cutoff);

/// Orthogonal projector onto the joint kernel of the Gauss generators.
SparseOp gauss_projector(const ModelParams& p, int link_cutoff);

/// Basis-state indices spanning the image of gauss_projector (the
/// projector is diagonal in the product basis).
std::vector<long> gauss_kernel_indices(const ModelParams& p, int link_cutoff);

/// Gauge-eliminated Hamiltonian on N charge modes (window +-trunc),
/// including all constant terms and the ell*(sum Q)^2 penalty when ell > 0.
SparseOp build_effective_hamiltonian(const ModelParams& p);

/// Photonic Hamiltonian after the boson mapping Q -> N - N0,
/// phi -> a/sqrt(N0), on a fock basis of per-mode dimension d.
/// Standard choice d = 2*N0+1; other d are permitted (nonstandard window).
SparseOp build_hobm_hamiltonian(const ModelParams& p, int d = -1);

/// Integer-spin truncation: Q -> S^z, phi^dag -> S^+/|S|, |S|=sqrt(s(s+1)),
/// plus the ell*(sum S^z)^2 penalty.
SparseOp build_spin_hamiltonian(const ModelParams& p, int s);

/// Electric field density F = (1/(N-1)) sum_n (N-n) <Q_n> + eps0.
double efd(const std::vector<double>& charge_expectations, const ModelParams& p);

/// Sum of charge values: sum Q_n, sum (N_n - N0) or sum S^z_n by kind.
SparseOp total_charge_op(BasisPtr basis, int n0 = 0);

/// Per-mode charge diagonal of the total_charge_op convention, as a real
/// vector over basis states (used for sector filtering).
Eigen::VectorXd total_charge_diagonal(const ProductBasis& basis, int n0 = 0);

}  // namespace higgslab
