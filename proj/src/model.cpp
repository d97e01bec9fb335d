#include "higgslab/model.hpp"

#include <cmath>

namespace higgslab {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

SparseOp diagonal_op(BasisPtr basis, const Eigen::VectorXd& diag) {
  std::vector<Eigen::Triplet<Complex>> trips;
  trips.reserve(diag.size());
  for (long i = 0; i < diag.size(); ++i)
    if (diag[i] != 0.0) trips.emplace_back(i, i, Complex(diag[i], 0.0));
  SparseCd m(basis->total_dim(), basis->total_dim());
  m.setFromTriplets(trips.begin(), trips.end());
  return SparseOp(std::move(basis), std::move(m), true);
}

// Diagonal energy of a charge configuration under the gauge-eliminated
// Hamiltonian (Higgs + electric + background-field + constants + penalty).
double charge_diag_energy(const std::vector<double>& q, const ModelParams& p) {
  const int N = p.sites;
  double e = 0.0;
  double qtot = 0.0;
  for (int n = 1; n <= N; ++n) {
    e += q[n - 1] * q[n - 1] / (2.0 * p.rsq);
    qtot += q[n - 1];
  }
  for (int n = 1; n <= N - 1; ++n) e += (N - n) * q[n - 1] * q[n - 1] / (2.0 * p.beta);
  for (int n = 2; n <= N - 1; ++n)
    for (int j = 1; j <= n - 1; ++j) e += (N - n) * q[j - 1] * q[n - 1] / p.beta;
  for (int n = 1; n <= N - 1; ++n) e += p.eps0 * (N - n) * q[n - 1] / p.beta;
  e += -p.beta * (N - 1) + p.eps0 * p.eps0 * (N - 1) / (2.0 * p.beta);
  e += p.ell * qtot * qtot;
  return e;
}

}  // namespace

void ModelParams::validate() const {
  require(sites >= 2, "ModelParams: need at least two sites");
  require(beta > 0.0, "ModelParams: beta must be positive");
  require(rsq > 0.0, "ModelParams: R^2 must be positive");
  require(ell >= 0.0, "ModelParams: penalty weight must be non-negative");
  require(n0 >= 1, "ModelParams: N0 must be a positive integer");
  require(trunc >= 1, "ModelParams: truncation parameter must be >= 1");
}

BasisPtr make_gauge_basis(int sites, int charge_window, int link_cutoff) {
  require(sites >= 2, "make_gauge_basis: need at least two sites");
  require(charge_window >= 1, "make_gauge_basis: charge window must be >= 1");
  require(link_cutoff >= 1, "make_gauge_basis: link cutoff must be >= 1");
  std::vector<int> dims;
  for (int n = 0; n < sites; ++n) {
    dims.push_back(2 * charge_window + 1);
    if (n + 1 < sites) dims.push_back(2 * link_cutoff + 1);
  }
  return make_basis(static_cast<int>(dims.size()), dims, ModeKind::charge);
}

SparseOp build_full_gauge_hamiltonian(const ModelParams& p, int link_cutoff) {
  p.validate();
  require(link_cutoff >= 1, "build_full_gauge_hamiltonian: link cutoff must be >= 1");
  const int N = p.sites;
  const int k = p.trunc;
  BasisPtr basis = make_gauge_basis(N, k, link_cutoff);
  auto site_mode = [](int n) { return 2 * (n - 1); };  // n = 1..N
  auto link_mode = [](int n) { return 2 * n - 1; };    // n = 1..N-1

  Eigen::VectorXd diag(basis->total_dim());
  for (long i = 0; i < basis->total_dim(); ++i) {
    double e = -p.beta * (N - 1);
    for (int n = 1; n <= N; ++n) {
      double q = basis->value_of(i, site_mode(n));
      e += q * q / (2.0 * p.rsq);
    }
    for (int n = 1; n <= N - 1; ++n) {
      double E = basis->value_of(i, link_mode(n));
      e += (p.eps0 + E) * (p.eps0 + E) / (2.0 * p.beta);
    }
    diag[i] = e;
  }
  SparseOp H = diagonal_op(basis, diag);

  const MatrixXcd phi_raise = local_charge_lower(k).adjoint();
  const MatrixXcd phi_lower = local_charge_lower(k);
  const MatrixXcd u_raise = local_charge_lower(link_cutoff).adjoint();
  for (int n = 1; n <= N - 1; ++n) {
    SparseOp hop = embed_product(basis, {{site_mode(n), phi_raise},
                                         {link_mode(n), u_raise},
                                         {site_mode(n + 1), phi_lower}});
    SparseOp term = (hop + hop.adjoint()).scaled(-p.rsq / 2.0);
    H = H + term;
  }
  return SparseOp(basis, H.matrix(), true);
}

std::vector<SparseOp> gauss_generators(const ModelParams& p, int link_cutoff) {
  const int N = p.sites;
  const int k = p.trunc;
  BasisPtr basis = make_gauge_basis(N, k, link_cutoff);
  std::vector<SparseOp> gens;
  for (int n = 1; n <= N - 1; ++n) {
    Eigen::VectorXd diag(basis->total_dim());
    for (long i = 0; i < basis->total_dim(); ++i) {
      double E_n = basis->value_of(i, 2 * n - 1);
      double E_prev = (n >= 2) ? basis->value_of(i, 2 * n - 3) : 0.0;
      double Q_n = basis->value_of(i, 2 * (n - 1));
      diag[i] = E_n - E_prev - Q_n;
    }
    gens.push_back(diagonal_op(basis, diag));
  }
  return gens;
}

std::vector<long> gauss_kernel_indices(const ModelParams& p, int link_cutoff) {
  const int N = p.sites;
  BasisPtr basis = make_gauge_basis(N, p.trunc, link_cutoff);
  std::vector<long> idx;
  for (long i = 0; i < basis->total_dim(); ++i) {
    bool physical = true;
    double E_prev = 0.0;
    for (int n = 1; n <= N - 1; ++n) {
      double E_n = basis->value_of(i, 2 * n - 1);
      double Q_n = basis->value_of(i, 2 * (n - 1));
      if (E_n - E_prev - Q_n != 0.0) { physical = false; break; }
      E_prev = E_n;
    }
    if (physical) idx.push_back(i);
  }
  return idx;
}

SparseOp gauss_projector(const ModelParams& p, int link_cutoff) {
  BasisPtr basis = make_gauge_basis(p.sites, p.trunc, link_cutoff);
  auto idx = gauss_kernel_indices(p, link_cutoff);
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(basis->total_dim());
  for (long i : idx) diag[i] = 1.0;
  return diagonal_op(basis, diag);
}

SparseOp build_effective_hamiltonian(const ModelParams& p) {
  p.validate();
  const int N = p.sites;
  const int k = p.trunc;
  BasisPtr basis = make_charge_basis(N, k);

  Eigen::VectorXd diag(basis->total_dim());
  std::vector<double> q(N);
  for (long i = 0; i < basis->total_dim(); ++i) {
    for (int n = 0; n < N; ++n) q[n] = basis->value_of(i, n);
    diag[i] = charge_diag_energy(q, p);
  }
  SparseOp H = diagonal_op(basis, diag);

  const MatrixXcd raise = local_charge_lower(k).adjoint();
  const MatrixXcd lower = local_charge_lower(k);
  for (int n = 0; n + 1 < N; ++n) {
    SparseOp hop = embed_product(basis, {{n, raise}, {n + 1, lower}});
    H = H + (hop + hop.adjoint()).scaled(-p.rsq / 2.0);
  }
  return SparseOp(basis, H.matrix(), true);
}

SparseOp build_hobm_hamiltonian(const ModelParams& p, int d) {
  p.validate();
  const int N = p.sites;
  const double N0 = p.n0;
  if (d <= 0) d = 2 * p.n0 + 1;
  BasisPtr basis = make_fock_basis(N, d);

  const double constant =
      -p.beta * (N - 1) + p.eps0 * p.eps0 * (N - 1) / (2.0 * p.beta) +
      N0 * N0 * N / (2.0 * p.rsq) +
      N * (N - 1.0) * N0 * ((2.0 * N - 1.0) * N0 - 6.0 * p.eps0) / (12.0 * p.beta);

  Eigen::VectorXd diag(basis->total_dim());
  std::vector<double> m(N);
  for (long i = 0; i < basis->total_dim(); ++i) {
    for (int n = 0; n < N; ++n) m[n] = basis->value_of(i, n);
    double e = constant;
    double qtot = 0.0;
    for (int n = 1; n <= N; ++n) {
      e += (1.0 / (2.0 * p.rsq) + (N - n) / (2.0 * p.beta)) * m[n - 1] * m[n - 1];
      e += ((N - n) * (2.0 * p.eps0 - N0 * (N + n - 1.0)) / (2.0 * p.beta) -
            N0 / p.rsq) * m[n - 1];
      qtot += m[n - 1] - N0;
    }
    for (int n = 2; n <= N - 1; ++n)
      for (int j = 1; j <= n - 1; ++j)
        e += (N - n) * m[j - 1] * m[n - 1] / p.beta;
    e += p.ell * qtot * qtot;
    diag[i] = e;
  }
  SparseOp H = diagonal_op(basis, diag);

  const MatrixXcd a = local_destroy(d);
  const MatrixXcd a_dag = local_create(d);
  for (int n = 0; n + 1 < N; ++n) {
    SparseOp hop = embed_product(basis, {{n, a_dag}, {n + 1, a}});
    H = H + (hop + hop.adjoint()).scaled(-p.rsq / (2.0 * N0));
  }
  return SparseOp(basis, H.matrix(), true);
}

SparseOp build_spin_hamiltonian(const ModelParams& p, int s) {
  p.validate();
  require(s >= 1, "build_spin_hamiltonian: spin s must be >= 1");
  const int N = p.sites;
  BasisPtr basis = make_spin_basis(N, s);

  Eigen::VectorXd diag(basis->total_dim());
  std::vector<double> q(N);
  for (long i = 0; i < basis->total_dim(); ++i) {
    for (int n = 0; n < N; ++n) q[n] = basis->value_of(i, n);
    diag[i] = charge_diag_energy(q, p);
  }
  SparseOp H = diagonal_op(basis, diag);

  const double s_norm_sq = s * (s + 1.0);  // |S|^2
  const MatrixXcd sp = local_spin_plus(s);
  const MatrixXcd sm = local_spin_plus(s).adjoint();
  for (int n = 0; n + 1 < N; ++n) {
    SparseOp hop = embed_product(basis, {{n, sp}, {n + 1, sm}});
    H = H + (hop + hop.adjoint()).scaled(-p.rsq / (2.0 * s_norm_sq));
  }
  return SparseOp(basis, H.matrix(), true);
}

double efd(const std::vector<double>& charge_expectations, const ModelParams& p) {
  const int N = p.sites;
  require(static_cast<int>(charge_expectations.size()) == N,
          "efd: need one charge expectation per site");
  double f = 0.0;
  for (int n = 1; n <= N - 1; ++n) f += (N - n) * charge_expectations[n - 1];
  return f / (N - 1) + p.eps0;
}

Eigen::VectorXd total_charge_diagonal(const ProductBasis& basis, int n0) {
  Eigen::VectorXd diag(basis.total_dim());
  for (long i = 0; i < basis.total_dim(); ++i) {
    double tot = 0.0;
    for (int m = 0; m < basis.n_modes(); ++m) tot += basis.value_of(i, m);
    if (basis.kind() == ModeKind::fock) tot -= static_cast<double>(n0) * basis.n_modes();
    diag[i] = tot;
  }
  return diag;
}

SparseOp total_charge_op(BasisPtr basis, int n0) {
  Eigen::VectorXd diag = total_charge_diagonal(*basis, n0);
  return diagonal_op(std::move(basis), diag);
}

}  // namespace higgslab
