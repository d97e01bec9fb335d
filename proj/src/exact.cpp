#include "higgslab/exact.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "higgslab/rng.hpp"

namespace higgslab {

namespace {

Spectrum dense_lowest(const SparseCd& mat, int k, bool want_vectors) {
  MatrixXcd H(mat);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(H, want_vectors ? Eigen::ComputeEigenvectors
                                                              : Eigen::EigenvaluesOnly);
  Spectrum s;
  s.eigenvalues = es.eigenvalues().head(k);
  if (want_vectors) s.eigenvectors = es.eigenvectors().leftCols(k);
  return s;
}

// Restarted Lanczos with full reorthogonalization and deflation of
// converged (locked) eigenpairs; converges the lowest k in ascending order.
Spectrum lanczos_lowest(const SparseCd& A, int k, bool want_vectors,
                        std::uint64_t seed) {
  const long n = A.rows();
  const int pass_m = static_cast<int>(std::min<long>(n, std::max(4 * k + 60, 120)));
  const int max_passes = 60;
  double scale = 1.0;
  for (int c = 0; c < A.outerSize(); ++c) {
    double col_sum = 0.0;
    for (SparseCd::InnerIterator it(A, c); it; ++it) col_sum += std::abs(it.value());
    scale = std::max(scale, col_sum);
  }
  const double tol = 1e-11 * scale;

  auto rng = make_rng(seed);
  std::normal_distribution<double> g;
  auto random_vec = [&] {
    VectorXcd v(n);
    for (long i = 0; i < n; ++i) v[i] = Complex(g(rng), g(rng));
    return v;
  };

  std::vector<VectorXcd> locked;
  std::vector<double> locked_vals;
  auto project_out_locked = [&](VectorXcd& w) {
    for (const auto& u : locked) w -= u.dot(w) * u;
  };

  VectorXcd v0 = random_vec();
  for (int pass = 0; pass < max_passes && static_cast<int>(locked.size()) < k; ++pass) {
    project_out_locked(v0);
    if (v0.norm() < 1e-12) v0 = random_vec(), project_out_locked(v0);
    v0.normalize();

    std::vector<VectorXcd> V{v0};
    std::vector<double> alpha, beta;
    int m = 0;
    for (int j = 0; j < pass_m; ++j) {
      VectorXcd w = A * V[j];
      if (j > 0) w -= beta[j - 1] * V[j - 1];
      alpha.push_back(V[j].dot(w).real());
      w -= alpha[j] * V[j];
      for (const auto& u : V) w -= u.dot(w) * u;  // full reorthogonalization
      project_out_locked(w);
      double b = w.norm();
      m = j + 1;
      if (b < 1e-13 || j + 1 == pass_m) break;
      beta.push_back(b);
      V.push_back(w / b);
    }

    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      T(i, i) = alpha[i];
      if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);

    auto assemble = [&](int col) {
      VectorXcd x = VectorXcd::Zero(n);
      for (int i = 0; i < m; ++i) x += es.eigenvectors()(i, col) * V[i];
      return x;
    };

    // Lock Ritz pairs in ascending order while their true residual passes.
    int col = 0;
    bool locked_any = false;
    VectorXcd next_v0;
    while (col < m && static_cast<int>(locked.size()) < k) {
      VectorXcd x = assemble(col);
      project_out_locked(x);
      if (x.norm() < 1e-8) { ++col; continue; }
      x.normalize();
      double lam = x.dot(A * x).real();
      double resid = (A * x - lam * x).norm();
      if (resid <= tol) {
        locked.push_back(x);
        locked_vals.push_back(lam);
        locked_any = true;
        ++col;
      } else {
        next_v0 = x;  // refine this pair on the next pass
        break;
      }
    }
    if (static_cast<int>(locked.size()) >= k) break;
    if (next_v0.size() > 0) {
      v0 = next_v0;
    } else if (!locked_any) {
      v0 = random_vec();
    } else {
      v0 = assemble(std::min(col, m - 1));
    }
    // exhausted the whole space
    if (static_cast<long>(locked.size()) >= n) break;
  }

  if (static_cast<int>(locked.size()) < k)
    throw std::runtime_error("lanczos_lowest: eigensolver did not converge");

  // Locked pairs were found in ascending order per pass, but deflated
  // restarts can interleave; sort by eigenvalue.
  std::vector<int> order(locked.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return locked_vals[a] < locked_vals[b]; });

  Spectrum s;
  s.eigenvalues.resize(k);
  if (want_vectors) s.eigenvectors = MatrixXcd::Zero(n, k);
  for (int i = 0; i < k; ++i) {
    s.eigenvalues[i] = locked_vals[order[i]];
    if (want_vectors) s.eigenvectors.col(i) = locked[order[i]];
  }
  return s;
}

}  // namespace

Spectrum lowest_eigs(const SparseCd& mat, int k, bool want_vectors, std::uint64_t seed) {
  if (k < 1 || k > mat.rows())
    throw std::invalid_argument("lowest_eigs: k out of range for this block");
  if (mat.rows() <= 2000) return dense_lowest(mat, k, want_vectors);
  return lanczos_lowest(mat, k, want_vectors, seed);
}

Spectrum low_spectrum(const SparseOp& H, int k, std::optional<double> charge_sector,
                      int n0) {
  if (!H.hermitian_flag() && !H.is_hermitian())
    throw std::invalid_argument("low_spectrum: Hermitian operator required");
  if (!charge_sector) {
    return lowest_eigs(H.matrix(), k);
  }
  Eigen::VectorXd diag = total_charge_diagonal(*H.basis(), n0);
  auto idx = sector_indices(diag, *charge_sector);
  if (idx.empty()) throw std::invalid_argument("low_spectrum: empty charge sector");
  SparseCd block = restrict_matrix(H.matrix(), idx);
  Spectrum s = lowest_eigs(block, k);
  if (s.eigenvectors.cols() > 0) {
    MatrixXcd full = MatrixXcd::Zero(H.dim(), s.eigenvectors.cols());
    for (long c = 0; c < s.eigenvectors.cols(); ++c)
      full.col(c) = expand_vector(s.eigenvectors.col(c), idx, H.dim());
    s.eigenvectors = std::move(full);
  }
  return s;
}

std::vector<double> charge_profile(const StateVector& psi, int n0) {
  const ProductBasis& b = *psi.basis;
  std::vector<double> q(b.n_modes(), 0.0);
  for (long i = 0; i < b.total_dim(); ++i) {
    double w = std::norm(psi.amps[i]);
    if (w == 0.0) continue;
    for (int m = 0; m < b.n_modes(); ++m) q[m] += w * b.value_of(i, m);
  }
  if (b.kind() == ModeKind::fock)
    for (auto& v : q) v -= n0;
  return q;
}

std::vector<EdSweepPoint> ed_sweep(ModelParams base, Formulation form,
                                   const std::vector<double>& eps0_grid) {
  std::vector<EdSweepPoint> out;
  out.reserve(eps0_grid.size());
  for (double e0 : eps0_grid) {
    ModelParams p = base;
    p.eps0 = e0;
    SparseOp H;
    int n0 = 0;
    switch (form) {
      case Formulation::effective: H = build_effective_hamiltonian(p); break;
      case Formulation::hobm:
        H = build_hobm_hamiltonian(p, p.trunc);
        n0 = p.n0;
        break;
      case Formulation::spin: H = build_spin_hamiltonian(p, p.trunc); break;
      case Formulation::full_gauge:
        throw std::invalid_argument("ed_sweep: use the gauge-projected route instead");
    }
    Spectrum s = low_spectrum(H, 2, 0.0, n0);
    StateVector gs{H.basis(), s.eigenvectors.col(0)};
    EdSweepPoint pt;
    pt.eps0 = e0;
    pt.energy = s.eigenvalues[0];
    pt.gap = s.eigenvalues[1] - s.eigenvalues[0];
    pt.efd = efd(charge_profile(gs, n0), p);
    out.push_back(pt);
  }
  return out;
}

}  // namespace higgslab
