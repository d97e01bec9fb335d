#include "higgslab/circuit.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace higgslab {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

Eigen::VectorXd number_number_diagonal(double gprime, const std::vector<double>& omegas,
                                       const ProductBasis& basis) {
  const int N = basis.n_modes();
  Eigen::VectorXd diag(basis.total_dim());
  for (long i = 0; i < basis.total_dim(); ++i) {
    double e = 0.0;
    for (int n = 0; n < N; ++n) {
      double m = basis.value_of(i, n);
      e += gprime * 6.0 * m * (m + 2.0 * N - 1.0) + omegas[n] * m;
      for (int j = 0; j < n; ++j) e += gprime * 24.0 * basis.value_of(i, j) * m;
    }
    diag[i] = e;
  }
  return diag;
}

}  // namespace

SparseOp beam_splitter_hamiltonian(int c, int d, double g, double lambda,
                                   const std::vector<double>& omegas, BasisPtr basis) {
  require(basis->kind() == ModeKind::fock, "beam_splitter_hamiltonian: fock basis");
  require(c != d, "beam_splitter_hamiltonian: beam splitter needs two distinct modes");
  require(c >= 0 && c < basis->n_modes() && d >= 0 && d < basis->n_modes(),
          "beam_splitter_hamiltonian: mode out of range");
  require(static_cast<int>(omegas.size()) == basis->n_modes(),
          "beam_splitter_hamiltonian: one rotation frequency per mode");

  SparseOp hop = embed_product(
      basis, {{c, local_create(basis->dim(c))}, {d, local_destroy(basis->dim(d))}});
  SparseOp term = hop.scaled(g * std::exp(Complex(0.0, lambda)));
  SparseOp H = term + term.adjoint();
  Eigen::VectorXd rot = Eigen::VectorXd::Zero(basis->total_dim());
  for (long i = 0; i < basis->total_dim(); ++i)
    for (int n = 0; n < basis->n_modes(); ++n) rot[i] += omegas[n] * basis->value_of(i, n);
  std::vector<Eigen::Triplet<Complex>> trips;
  for (long i = 0; i < rot.size(); ++i)
    if (rot[i] != 0.0) trips.emplace_back(i, i, Complex(rot[i], 0.0));
  SparseCd diag(basis->total_dim(), basis->total_dim());
  diag.setFromTriplets(trips.begin(), trips.end());
  return SparseOp(basis, SparseCd(H.matrix() + diag), true);
}

SparseOp number_number_hamiltonian(double gprime, const std::vector<double>& omegas,
                                   BasisPtr basis) {
  require(basis->kind() == ModeKind::fock, "number_number_hamiltonian: fock basis");
  require(static_cast<int>(omegas.size()) == basis->n_modes(),
          "number_number_hamiltonian: one rotation frequency per mode");
  Eigen::VectorXd diag = number_number_diagonal(gprime, omegas, *basis);
  std::vector<Eigen::Triplet<Complex>> trips;
  for (long i = 0; i < diag.size(); ++i)
    if (diag[i] != 0.0) trips.emplace_back(i, i, Complex(diag[i], 0.0));
  SparseCd m(basis->total_dim(), basis->total_dim());
  m.setFromTriplets(trips.begin(), trips.end());
  return SparseOp(std::move(basis), std::move(m), true);
}

SparseOp squid_expansion_oracle(int n_modes, BasisPtr basis) {
  require(basis->kind() == ModeKind::fock, "squid_expansion_oracle: fock basis");
  require(n_modes == basis->n_modes(), "squid_expansion_oracle: mode count mismatch");
  if (basis->total_dim() > 10000)
    throw std::runtime_error("squid_expansion_oracle: dimension too large for brute force");

  // Symbols 0..2N-1: even = a_mode, odd = a^dag_mode.
  const int n_symbols = 2 * n_modes;
  std::vector<std::array<int, 4>> balanced;
  std::array<int, 4> sym{};
  for (sym[0] = 0; sym[0] < n_symbols; ++sym[0])
    for (sym[1] = 0; sym[1] < n_symbols; ++sym[1])
      for (sym[2] = 0; sym[2] < n_symbols; ++sym[2])
        for (sym[3] = 0; sym[3] < n_symbols; ++sym[3]) {
          std::vector<int> net(n_modes, 0);
          for (int i = 0; i < 4; ++i) net[sym[i] / 2] += (sym[i] % 2) ? +1 : -1;
          bool ok = true;
          for (int v : net) ok = ok && v == 0;
          if (ok) balanced.push_back(sym);
        }

  Eigen::VectorXd diag = Eigen::VectorXd::Zero(basis->total_dim());
  std::vector<int> occ(n_modes);
  for (long s = 0; s < basis->total_dim(); ++s) {
    for (int n = 0; n < n_modes; ++n) occ[n] = basis->level_of(s, n);
    double total = 0.0;
    for (const auto& mono : balanced) {
      double amp = 1.0;
      std::vector<int> m = occ;
      for (int i = 3; i >= 0 && amp != 0.0; --i) {  // rightmost factor acts first
        int mode = mono[i] / 2;
        if (mono[i] % 2) {  // creation
          if (m[mode] + 1 >= basis->dim(mode)) { amp = 0.0; break; }
          amp *= std::sqrt(static_cast<double>(m[mode] + 1));
          ++m[mode];
        } else {  // annihilation
          if (m[mode] == 0) { amp = 0.0; break; }
          amp *= std::sqrt(static_cast<double>(m[mode]));
          --m[mode];
        }
      }
      total += amp;
    }
    diag[s] = total;
  }
  std::vector<Eigen::Triplet<Complex>> trips;
  for (long i = 0; i < diag.size(); ++i)
    if (diag[i] != 0.0) trips.emplace_back(i, i, Complex(diag[i], 0.0));
  SparseCd m(basis->total_dim(), basis->total_dim());
  m.setFromTriplets(trips.begin(), trips.end());
  return SparseOp(std::move(basis), std::move(m), true);
}

namespace {

/// Apply a dense unitary on the joint space of two modes (gather/scatter).
void apply_two_mode_unitary(const ProductBasis& basis, int c, int d,
                            const MatrixXcd& U, VectorXcd& v) {
  const int dc = basis.dim(c), dd = basis.dim(d);
  const long sc = basis.stride(c), sd = basis.stride(d);
  const long dim = basis.total_dim();
  VectorXcd block(dc * dd);
  std::vector<long> base_indices;
  base_indices.reserve(dim / (dc * dd));
  for (long i = 0; i < dim; ++i) {
    if (basis.level_of(i, c) == 0 && basis.level_of(i, d) == 0) base_indices.push_back(i);
  }
  for (long base : base_indices) {
    for (int lc = 0; lc < dc; ++lc)
      for (int ld = 0; ld < dd; ++ld) block[lc * dd + ld] = v[base + lc * sc + ld * sd];
    block = U * block;
    for (int lc = 0; lc < dc; ++lc)
      for (int ld = 0; ld < dd; ++ld) v[base + lc * sc + ld * sd] = block[lc * dd + ld];
  }
}

}  // namespace

StateVector apply_beam_splitter_gate(int c, int d, double g, double lambda,
                                     const std::vector<double>& omega, double t,
                                     const StateVector& psi) {
  const ProductBasis& basis = *psi.basis;
  require(c != d, "apply_beam_splitter_gate: distinct modes required");
  const int dc = basis.dim(c), dd = basis.dim(d);

  // Two-mode part: g(e^{i lambda} a_c^dag a_d + h.c.) + Omega_c N_c + Omega_d N_d.
  MatrixXcd h2 = MatrixXcd::Zero(dc * dd, dc * dd);
  const MatrixXcd ac = local_destroy(dc), ad = local_destroy(dd);
  for (int lc = 0; lc < dc; ++lc)
    for (int ld = 0; ld < dd; ++ld) {
      int col = lc * dd + ld;
      h2(col, col) += omega[c] * lc + omega[d] * ld;
      if (lc + 1 < dc && ld >= 1) {
        int row = (lc + 1) * dd + (ld - 1);
        Complex amp = g * std::exp(Complex(0.0, lambda)) *
                      std::conj(ac(lc, lc + 1)) * ad(ld - 1, ld);
        h2(row, col) += amp;
        h2(col, row) += std::conj(amp);
      }
    }
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h2);
  MatrixXcd U = es.eigenvectors() *
                (es.eigenvalues().unaryExpr([t](double lam) {
                   return std::exp(Complex(0.0, -t * lam));
                 })).asDiagonal().toDenseMatrix() *
                es.eigenvectors().adjoint();

  StateVector out{psi.basis, psi.amps};
  apply_two_mode_unitary(basis, c, d, U, out.amps);
  // Spectator rotations commute with the two-mode block.
  for (long i = 0; i < basis.total_dim(); ++i) {
    double phase = 0.0;
    for (int n = 0; n < basis.n_modes(); ++n) {
      if (n == c || n == d) continue;
      phase += omega[n] * basis.value_of(i, n);
    }
    if (phase != 0.0) out.amps[i] *= std::exp(Complex(0.0, -t * phase));
  }
  return out;
}

StateVector apply_number_number_gate(double gprime, const std::vector<double>& omega,
                                     double t, const StateVector& psi) {
  Eigen::VectorXd diag = number_number_diagonal(gprime, omega, *psi.basis);
  StateVector out{psi.basis, psi.amps};
  for (long i = 0; i < diag.size(); ++i)
    out.amps[i] *= std::exp(Complex(0.0, -t * diag[i]));
  return out;
}

AnsatzSpec AnsatzSpec::c14(int n_modes, int layers) {
  AnsatzSpec s;
  s.kind = Kind::c14;
  s.layers = layers;
  s.pair_c = 0;
  s.pair_d = n_modes - 1;
  s.lambda = 0.0;
  return s;
}

AnsatzSpec AnsatzSpec::generic_pair(int c, int d, int layers, double lambda) {
  AnsatzSpec s;
  s.kind = Kind::generic_pair;
  s.layers = layers;
  s.pair_c = c;
  s.pair_d = d;
  s.lambda = lambda;
  return s;
}

StateVector apply_ansatz(const AnsatzSpec& spec, const std::vector<double>& theta,
                         const std::vector<double>& omega, const StateVector& psi_in) {
  const int N = psi_in.basis->n_modes();
  require(static_cast<int>(theta.size()) == spec.theta_count(),
          "apply_ansatz: theta layout mismatch");
  require(static_cast<int>(omega.size()) == N, "apply_ansatz: omega layout mismatch");
  StateVector psi = psi_in;
  // Written product: prod_j NN(theta_{2j-1}) BS(theta_{2j}); rightmost acts first.
  for (int j = spec.layers; j >= 1; --j) {
    psi = apply_beam_splitter_gate(spec.pair_c, spec.pair_d, 1.0, spec.lambda, omega,
                                   theta[2 * j - 1], psi);
    psi = apply_number_number_gate(1.0, omega, theta[2 * j - 2], psi);
  }
  psi.normalize();
  return psi;
}

StateVector apply_block(const BlockSpec& spec, int block, const std::vector<double>& theta,
                        const std::vector<double>& omega, const StateVector& psi_in) {
  const int N = psi_in.basis->n_modes();
  require(static_cast<int>(theta.size()) == spec.theta_count(block, N),
          "apply_block: theta layout mismatch");
  const int layers = spec.layers_of(block);
  const int n_pairs = BlockSpec::pairs(N);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < N - 1; ++i)
    for (int j = i + 1; j < N; ++j) pairs.push_back({i, j});

  StateVector psi = psi_in;
  // Block = D^1 ... D^{layers}; rightmost (layer index `layers`) acts first,
  // and within each D the last written pair acts first.
  for (int layer = layers - 1; layer >= 0; --layer) {
    for (int pr = n_pairs - 1; pr >= 0; --pr) {
      const int base = (layer * n_pairs + pr) * 2;
      psi = apply_beam_splitter_gate(pairs[pr].first, pairs[pr].second, 1.0, 0.0, omega,
                                     theta[base + 1], psi);
      psi = apply_number_number_gate(1.0, omega, theta[base], psi);
    }
  }
  psi.normalize();
  return psi;
}

StateVector apply_block_protocol(const BlockSpec& spec,
                                 const std::vector<std::vector<double>>& thetas,
                                 const std::vector<double>& omega,
                                 const StateVector& psi_in) {
  require(static_cast<int>(thetas.size()) <= spec.n_blocks,
          "apply_block_protocol: too many theta sets");
  StateVector psi = psi_in;
  for (size_t k = 0; k < thetas.size(); ++k)
    psi = apply_block(spec, static_cast<int>(k), thetas[k], omega, psi);
  return psi;
}

}  // namespace higgslab
