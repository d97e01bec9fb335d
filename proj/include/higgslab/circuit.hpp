#pragma once

#include "higgslab/hilbert.hpp"

namespace higgslab {

/// g (e^{i lambda} a_c^dag a_d + h.c.) + sum_n Omega_n N_n on a fock basis.
SparseOp beam_splitter_hamiltonian(int c, int d, double g, double lambda,
                                   const std::vector<double>& omegas, BasisPtr basis);

/// g' (6 sum_n N_n (N_n + 2N - 1) + 24 sum_{j<n} N_j N_n) + sum_n Omega_n N_n.
/// Diagonal in the fock basis.
SparseOp number_number_hamiltonian(double gprime, const std::vector<double>& omegas,
                                   BasisPtr basis);

/// Brute-force expansion of (sum_n a_n + a_n^dag)^4 keeping only the
/// monomials whose net excitation change vanishes on every mode.
/// Equals number_number_hamiltonian(1, 0) + 3N(N-1) + 3N on states away
/// from the truncation edge.
SparseOp squid_expansion_oracle(int n_modes, BasisPtr basis);

/// Variational circuit families.
struct AnsatzSpec {
  enum class Kind { c14, generic_pair };
  Kind kind = Kind::c14;
  int layers = 1;       // N_l
  int pair_c = 0;       // beam-splitter modes (0-based); c14 fixes (0, N-1)
  int pair_d = 3;
  double lambda = 0.0;  // beam-splitter phase, 0 for c14

  static AnsatzSpec c14(int n_modes, int layers);
  static AnsatzSpec generic_pair(int c, int d, int layers, double lambda = 0.0);

  /// 2*N_l gate durations; the optimizer additionally owns N rotations.
  int theta_count() const { return 2 * layers; }
  int parameter_count(int n_modes) const { return theta_count() + n_modes; }
};

/// Apply the layered circuit
///   prod_{j=1..N_l} exp(-i theta_{2j-1} H_NN(Omega)) exp(-i theta_{2j} H_BS(Omega))
/// to psi_in; the rightmost written factor acts first. Output normalized;
/// total photon number preserved.
StateVector apply_ansatz(const AnsatzSpec& spec, const std::vector<double>& theta,
                         const std::vector<double>& omega, const StateVector& psi_in);

/// Block-wise protocol: D^k = prod_{i<j} C_(i,j) over all mode pairs in
/// lexicographic order (rightmost written factor acts first), one layer
/// per C; a block applies D^1 ... D^{layers} with independent theta sets.
/// theta layout per block: layers * n_pairs * 2 values, ordered
/// [layer][pair][nn, bs].
struct BlockSpec {
  int n_blocks = 5;
  int layers_first = 2;
  int layers_rest = 3;

  int layers_of(int block) const { return block == 0 ? layers_first : layers_rest; }
  static int pairs(int n_modes) { return n_modes * (n_modes - 1) / 2; }
  int theta_count(int block, int n_modes) const {
    return layers_of(block) * pairs(n_modes) * 2;
  }
};

/// Apply one block D^1..D^{layers} with the given theta set.
StateVector apply_block(const BlockSpec& spec, int block, const std::vector<double>& theta,
                        const std::vector<double>& omega, const StateVector& psi_in);

/// Apply the full multi-block protocol; thetas[k] parameterizes block k.
/// Omega enters every gate but is optimized only with the first block.
StateVector apply_block_protocol(const BlockSpec& spec,
                                 const std::vector<std::vector<double>>& thetas,
                                 const std::vector<double>& omega,
                                 const StateVector& psi_in);

/// exp(-i t H_BS^{(c,d)}(Omega, lambda)) psi via an exact two-mode unitary
/// plus commuting spectator phases (fast path used by the ansatz).
StateVector apply_beam_splitter_gate(int c, int d, double g, double lambda,
                                     const std::vector<double>& omega, double t,
                                     const StateVector& psi);

/// exp(-i t H_NN(Omega)) psi (diagonal phases).
StateVector apply_number_number_gate(double gprime, const std::vector<double>& omega,
                                     double t, const StateVector& psi);

}  // namespace higgslab
