#include "higgslab/hilbert.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace higgslab {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

ProductBasis::ProductBasis(int n_modes, std::vector<int> cutoffs, ModeKind kind)
    : n_modes_(n_modes), cutoffs_(std::move(cutoffs)), kind_(kind) {
  require(n_modes_ >= 1, "ProductBasis: need at least one mode");
  require(static_cast<int>(cutoffs_.size()) == n_modes_,
          "ProductBasis: one cutoff per mode");
  for (int d : cutoffs_) require(d >= 2, "ProductBasis: every cutoff must be >= 2");
  if (kind_ != ModeKind::fock) {
    for (int d : cutoffs_)
      require(d % 2 == 1, "ProductBasis: charge/spin modes need odd dimension 2k+1");
  }
  strides_.assign(n_modes_, 1);
  for (int m = n_modes_ - 2; m >= 0; --m) strides_[m] = strides_[m + 1] * cutoffs_[m + 1];
  total_dim_ = strides_[0] * cutoffs_[0];
}

long ProductBasis::encode(const std::vector<int>& levels) const {
  require(static_cast<int>(levels.size()) == n_modes_, "encode: wrong tuple length");
  long idx = 0;
  for (int m = 0; m < n_modes_; ++m) {
    require(levels[m] >= 0 && levels[m] < cutoffs_[m], "encode: level out of range");
    idx += levels[m] * strides_[m];
  }
  return idx;
}

std::vector<int> ProductBasis::decode(long index) const {
  require(index >= 0 && index < total_dim_, "decode: index out of range");
  std::vector<int> levels(n_modes_);
  for (int m = 0; m < n_modes_; ++m) levels[m] = level_of(index, m);
  return levels;
}

BasisPtr make_basis(int n_modes, const std::vector<int>& cutoffs, ModeKind kind) {
  return std::make_shared<ProductBasis>(n_modes, cutoffs, kind);
}

BasisPtr make_fock_basis(int n_modes, int dim) {
  return make_basis(n_modes, std::vector<int>(n_modes, dim), ModeKind::fock);
}

BasisPtr make_charge_basis(int n_modes, int k) {
  require(k >= 1, "make_charge_basis: window k must be >= 1");
  return make_basis(n_modes, std::vector<int>(n_modes, 2 * k + 1), ModeKind::charge);
}

BasisPtr make_spin_basis(int n_modes, int s) {
  require(s >= 1, "make_spin_basis: spin s must be >= 1");
  return make_basis(n_modes, std::vector<int>(n_modes, 2 * s + 1), ModeKind::spin);
}

SparseOp::SparseOp(BasisPtr basis, SparseCd mat, bool hermitian)
    : basis_(std::move(basis)), mat_(std::move(mat)), hermitian_(hermitian) {
  if (!basis_) throw std::invalid_argument("SparseOp: null basis");
  if (mat_.rows() != basis_->total_dim() || mat_.cols() != basis_->total_dim())
    throw std::invalid_argument("SparseOp: matrix shape does not match basis");
  mat_.makeCompressed();
}

SparseOp SparseOp::adjoint() const {
  return SparseOp(basis_, SparseCd(mat_.adjoint()), hermitian_);
}

bool SparseOp::is_hermitian(double tol) const {
  SparseCd diff = SparseCd(mat_.adjoint()) - mat_;
  double scale = 1.0;
  for (int k = 0; k < mat_.outerSize(); ++k)
    for (SparseCd::InnerIterator it(mat_, k); it; ++it)
      scale = std::max(scale, std::abs(it.value()));
  for (int k = 0; k < diff.outerSize(); ++k)
    for (SparseCd::InnerIterator it(diff, k); it; ++it)
      if (std::abs(it.value()) > tol * scale) return false;
  return true;
}

VectorXcd SparseOp::apply(const VectorXcd& v) const { return mat_ * v; }

bool SparseOp::is_diagonal() const {
  for (int k = 0; k < mat_.outerSize(); ++k)
    for (SparseCd::InnerIterator it(mat_, k); it; ++it)
      if (it.row() != it.col() && std::abs(it.value()) > 0.0) return false;
  return true;
}

SparseOp SparseOp::operator+(const SparseOp& o) const {
  require(basis_ && o.basis_ && *basis_ == *o.basis_, "SparseOp+: basis mismatch");
  return SparseOp(basis_, SparseCd(mat_ + o.mat_), hermitian_ && o.hermitian_);
}

SparseOp SparseOp::operator-(const SparseOp& o) const {
  require(basis_ && o.basis_ && *basis_ == *o.basis_, "SparseOp-: basis mismatch");
  return SparseOp(basis_, SparseCd(mat_ - o.mat_), hermitian_ && o.hermitian_);
}

SparseOp SparseOp::operator*(const SparseOp& o) const {
  require(basis_ && o.basis_ && *basis_ == *o.basis_, "SparseOp*: basis mismatch");
  return SparseOp(basis_, SparseCd(mat_ * o.mat_), false);
}

SparseOp SparseOp::scaled(Complex c) const {
  return SparseOp(basis_, SparseCd(mat_ * c), hermitian_ && c.imag() == 0.0);
}

StateVector StateVector::product_state(BasisPtr basis, const std::vector<int>& values) {
  std::vector<int> levels(values.size());
  for (size_t m = 0; m < values.size(); ++m) {
    levels[m] = values[m] + basis->level_offset(static_cast<int>(m));
  }
  VectorXcd amps = VectorXcd::Zero(basis->total_dim());
  amps[basis->encode(levels)] = 1.0;
  return StateVector{std::move(basis), std::move(amps)};
}

MatrixXcd local_destroy(int d) {
  MatrixXcd a = MatrixXcd::Zero(d, d);
  for (int m = 1; m < d; ++m) a(m - 1, m) = std::sqrt(static_cast<double>(m));
  return a;
}

MatrixXcd local_create(int d) { return local_destroy(d).adjoint(); }

MatrixXcd local_number(int d) {
  MatrixXcd n = MatrixXcd::Zero(d, d);
  for (int m = 0; m < d; ++m) n(m, m) = m;
  return n;
}

MatrixXcd local_identity(int d) { return MatrixXcd::Identity(d, d); }

MatrixXcd local_charge_value(int k) {
  int d = 2 * k + 1;
  MatrixXcd q = MatrixXcd::Zero(d, d);
  for (int l = 0; l < d; ++l) q(l, l) = l - k;
  return q;
}

MatrixXcd local_charge_lower(int k) {
  int d = 2 * k + 1;
  MatrixXcd phi = MatrixXcd::Zero(d, d);
  for (int l = 1; l < d; ++l) phi(l - 1, l) = 1.0;  // |Q-1><Q|, unit amplitude
  return phi;
}

MatrixXcd local_spin_z(int s) {
  int d = 2 * s + 1;
  MatrixXcd sz = MatrixXcd::Zero(d, d);
  for (int l = 0; l < d; ++l) sz(l, l) = l - s;
  return sz;
}

MatrixXcd local_spin_plus(int s) {
  int d = 2 * s + 1;
  MatrixXcd sp = MatrixXcd::Zero(d, d);
  for (int l = 0; l + 1 < d; ++l) {
    double m = l - s;
    sp(l + 1, l) = std::sqrt(s * (s + 1.0) - m * (m + 1.0));
  }
  return sp;
}

MatrixXcd local_ladder_monomial(int d, int p, int q) {
  MatrixXcd out = MatrixXcd::Zero(d, d);
  for (int m = q; m < d; ++m) {
    int mp = m - q + p;
    if (mp >= d) continue;
    double amp = 1.0;
    for (int j = 0; j < q; ++j) amp *= std::sqrt(static_cast<double>(m - j));
    for (int j = 0; j < p; ++j) amp *= std::sqrt(static_cast<double>(m - q + j + 1));
    out(mp, m) = amp;
  }
  return out;
}

SparseOp identity_op(BasisPtr basis) {
  SparseCd id(basis->total_dim(), basis->total_dim());
  id.setIdentity();
  return SparseOp(std::move(basis), std::move(id), true);
}

SparseOp embed(BasisPtr basis, int mode, const MatrixXcd& local, bool hermitian) {
  return SparseOp(basis,
                  embed_product(basis, {{mode, local}}).matrix(), hermitian);
}

SparseOp embed_product(BasisPtr basis,
                       const std::vector<std::pair<int, MatrixXcd>>& factors) {
  require(!factors.empty(), "embed_product: empty factor list");
  // Collapse repeated modes by matrix product (list order = operator order).
  std::vector<int> modes;
  std::vector<MatrixXcd> locals;
  for (const auto& [mode, mat] : factors) {
    require(mode >= 0 && mode < basis->n_modes(), "embed_product: mode out of range");
    require(mat.rows() == basis->dim(mode) && mat.cols() == basis->dim(mode),
            "embed_product: local matrix does not match mode dimension");
    auto it = std::find(modes.begin(), modes.end(), mode);
    if (it == modes.end()) {
      modes.push_back(mode);
      locals.push_back(mat);
    } else {
      size_t i = it - modes.begin();
      locals[i] = locals[i] * mat;
    }
  }

  const long dim = basis->total_dim();
  std::vector<Eigen::Triplet<Complex>> trips;
  std::vector<int> in_levels(modes.size());
  // Column-wise construction: for each basis column, combine local columns.
  for (long col = 0; col < dim; ++col) {
    for (size_t i = 0; i < modes.size(); ++i) in_levels[i] = basis->level_of(col, modes[i]);
    // Enumerate output level combinations with nonzero amplitude.
    std::vector<std::vector<std::pair<int, Complex>>> cols(modes.size());
    bool dead = false;
    for (size_t i = 0; i < modes.size(); ++i) {
      const MatrixXcd& L = locals[i];
      for (int r = 0; r < L.rows(); ++r) {
        Complex v = L(r, in_levels[i]);
        if (v != Complex(0.0)) cols[i].push_back({r, v});
      }
      if (cols[i].empty()) { dead = true; break; }
    }
    if (dead) continue;
    std::vector<size_t> pick(modes.size(), 0);
    while (true) {
      long row = col;
      Complex amp = 1.0;
      for (size_t i = 0; i < modes.size(); ++i) {
        const auto& [lvl, v] = cols[i][pick[i]];
        row += (lvl - in_levels[i]) * basis->stride(modes[i]);
        amp *= v;
      }
      trips.emplace_back(row, col, amp);
      size_t i = 0;
      while (i < pick.size() && ++pick[i] == cols[i].size()) pick[i++] = 0;
      if (i == pick.size()) break;
    }
  }
  SparseCd mat(dim, dim);
  mat.setFromTriplets(trips.begin(), trips.end());
  return SparseOp(std::move(basis), std::move(mat), false);
}

LadderOps ladder(int mode, BasisPtr basis) {
  require(mode >= 0 && mode < basis->n_modes(), "ladder: mode out of range");
  require(basis->kind() == ModeKind::fock, "ladder: fock basis required");
  int d = basis->dim(mode);
  LadderOps ops;
  ops.a = embed(basis, mode, local_destroy(d));
  ops.a_dag = embed(basis, mode, local_create(d));
  ops.number = embed(basis, mode, local_number(d), true);
  return ops;
}

ChargeOps charge_ops(int mode, BasisPtr basis) {
  require(basis->kind() == ModeKind::charge, "charge_ops: charge basis required");
  int k = basis->level_offset(mode);
  ChargeOps ops;
  ops.lower = embed(basis, mode, local_charge_lower(k));
  ops.raise = embed(basis, mode, local_charge_lower(k).adjoint());
  ops.q = embed(basis, mode, local_charge_value(k), true);
  return ops;
}

SpinOps spin_ops(int mode, BasisPtr basis) {
  require(basis->kind() == ModeKind::spin, "spin_ops: spin basis required");
  int s = basis->level_offset(mode);
  SpinOps ops;
  ops.sp = embed(basis, mode, local_spin_plus(s));
  ops.sm = embed(basis, mode, local_spin_plus(s).adjoint());
  ops.sz = embed(basis, mode, local_spin_z(s), true);
  return ops;
}

SparseOp truncation_defect(int k, int N0) {
  require(k >= 1 && N0 >= 1, "truncation_defect: k and N0 must be positive");
  int d = 2 * k + 1;
  // a(k) on the window N0-k .. N0+k; transitions leaving the window drop.
  MatrixXcd a = MatrixXcd::Zero(d, d);
  for (int l = 1; l < d; ++l) {
    int m = N0 - k + l;  // occupation of level l
    a(l - 1, l) = std::sqrt(static_cast<double>(m));
  }
  MatrixXcd comm = (a * a.adjoint() - a.adjoint() * a) / static_cast<double>(N0);
  BasisPtr basis = make_fock_basis(1, d);
  return embed(basis, 0, comm, true);
}

Complex expval(const SparseOp& A, const StateVector& psi) {
  if (!A.basis() || !psi.basis || !(*A.basis() == *psi.basis))
    throw std::invalid_argument("expval: basis mismatch");
  return psi.amps.dot(A.matrix() * psi.amps);
}

namespace {

VectorXcd dense_expmv(const SparseCd& A, double t, const VectorXcd& v) {
  MatrixXcd H(A);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(H);
  VectorXcd phases(es.eigenvalues().size());
  for (long i = 0; i < phases.size(); ++i)
    phases[i] = std::exp(Complex(0.0, -t * es.eigenvalues()[i]));
  return es.eigenvectors() * (phases.asDiagonal() * (es.eigenvectors().adjoint() * v));
}

// One Lanczos pass approximating exp(-i*t*A) v; returns the error estimate.
VectorXcd lanczos_expmv_step(const SparseCd& A, double t, const VectorXcd& v,
                             int max_m, double tol, double* err_out) {
  const long n = v.size();
  const double beta0 = v.norm();
  if (beta0 == 0.0) { *err_out = 0.0; return v; }
  int m_cap = static_cast<int>(std::min<long>(n, max_m));
  std::vector<VectorXcd> V;
  V.reserve(m_cap + 1);
  V.push_back(v / beta0);
  std::vector<double> alpha, beta;
  double err = 0.0;
  int m = 0;
  VectorXcd result;
  for (int j = 0; j < m_cap; ++j) {
    VectorXcd w = A * V[j];
    if (j > 0) w -= beta[j - 1] * V[j - 1];
    Complex a = V[j].dot(w);
    alpha.push_back(a.real());
    w -= alpha[j] * V[j];
    // full reorthogonalization
    for (const auto& u : V) w -= u.dot(w) * u;
    double b = w.norm();
    m = j + 1;
    // Evaluate exp of the tridiagonal projection.
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      T(i, i) = alpha[i];
      if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta.size() > static_cast<size_t>(i) ? beta[i] : 0.0;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    VectorXcd e1 = VectorXcd::Zero(m);
    e1[0] = 1.0;
    VectorXcd y = es.eigenvectors().cast<Complex>() *
                  ((es.eigenvalues().unaryExpr([t](double lam) {
                      return std::exp(Complex(0.0, -t * lam));
                    })).asDiagonal() *
                   (es.eigenvectors().transpose().cast<Complex>() * e1));
    err = (m > 1) ? std::abs(b * std::abs(y[m - 1])) : b;
    if (b < 1e-14 || err < tol || j + 1 == m_cap) {
      result = VectorXcd::Zero(n);
      for (int i = 0; i < m; ++i) result += (beta0 * y[i]) * V[i];
      break;
    }
    beta.push_back(b);
    V.push_back(w / b);
  }
  *err_out = err;
  return result;
}

}  // namespace

VectorXcd expmv(const SparseCd& A, double t, const VectorXcd& v, double tol) {
  if (A.rows() <= 96) return dense_expmv(A, t, v);
  // Substep until the per-step Krylov error estimate is small enough.
  int steps = 1;
  const int max_m = 40;
  for (;;) {
    VectorXcd x = v;
    double worst = 0.0;
    for (int s = 0; s < steps; ++s) {
      double err = 0.0;
      x = lanczos_expmv_step(A, t / steps, x, max_m, tol / steps, &err);
      worst = std::max(worst, err);
    }
    if (worst <= tol / steps || steps >= 64) return x;
    steps *= 2;
  }
}

StateVector evolve(const SparseOp& H, double t, const StateVector& psi) {
  if (!H.basis() || !psi.basis || !(*H.basis() == *psi.basis))
    throw std::invalid_argument("evolve: basis mismatch");
  if (!H.hermitian_flag() && !H.is_hermitian())
    throw std::invalid_argument("evolve: Hamiltonian must be Hermitian");
  StateVector out{psi.basis, VectorXcd()};
  if (H.is_diagonal()) {
    VectorXcd d = H.matrix().diagonal();
    out.amps = psi.amps;
    for (long i = 0; i < d.size(); ++i)
      out.amps[i] *= std::exp(Complex(0.0, -t * d[i].real()));
  } else {
    out.amps = expmv(H.matrix(), t, psi.amps);
  }
  return out;
}

std::vector<long> sector_indices(const Eigen::VectorXd& diagonal, double value,
                                 double tol) {
  std::vector<long> idx;
  for (long i = 0; i < diagonal.size(); ++i)
    if (std::abs(diagonal[i] - value) <= tol) idx.push_back(i);
  return idx;
}

SparseCd restrict_matrix(const SparseCd& mat, const std::vector<long>& indices) {
  std::vector<long> pos(mat.rows(), -1);
  for (size_t i = 0; i < indices.size(); ++i) pos[indices[i]] = static_cast<long>(i);
  std::vector<Eigen::Triplet<Complex>> trips;
  for (size_t j = 0; j < indices.size(); ++j) {
    for (SparseCd::InnerIterator it(mat, indices[j]); it; ++it) {
      long r = pos[it.row()];
      if (r >= 0) trips.emplace_back(r, static_cast<long>(j), it.value());
    }
  }
  SparseCd out(indices.size(), indices.size());
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

VectorXcd restrict_vector(const VectorXcd& v, const std::vector<long>& indices) {
  VectorXcd out(indices.size());
  for (size_t i = 0; i < indices.size(); ++i) out[i] = v[indices[i]];
  return out;
}

VectorXcd expand_vector(const VectorXcd& v, const std::vector<long>& indices, long full_dim) {
  VectorXcd out = VectorXcd::Zero(full_dim);
  for (size_t i = 0; i < indices.size(); ++i) out[indices[i]] = v[i];
  return out;
}

}  // namespace higgslab
