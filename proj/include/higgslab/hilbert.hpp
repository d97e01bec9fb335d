#pragma once

#include <complex>
#include <memory>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace higgslab {

using Complex = std::complex<double>;
using SparseCd = Eigen::SparseMatrix<Complex>;
using VectorXcd = Eigen::VectorXcd;
using MatrixXcd = Eigen::MatrixXcd;

/// Local-space flavour of every mode in a ProductBasis.
/// fock: levels are photon numbers 0..d-1.
/// charge: levels encode charge values -k..k (d = 2k+1).
/// spin: levels encode S^z values -s..s (d = 2s+1).
enum class ModeKind { fock, charge, spin };

class ProductBasis;
using BasisPtr = std::shared_ptr<const ProductBasis>;

/// Indexed truncated product space with a row-major index codec
/// (mode 0 is the most significant digit).
class ProductBasis {
 public:
  ProductBasis(int n_modes, std::vector<int> cutoffs, ModeKind kind);

  int n_modes() const { return n_modes_; }
  int dim(int mode) const { return cutoffs_.at(mode); }
  const std::vector<int>& cutoffs() const { return cutoffs_; }
  long total_dim() const { return total_dim_; }
  ModeKind kind() const { return kind_; }

  /// Offset between stored level and physical occupation value of `mode`
  /// (k for charge windows, s for spin, 0 for fock).
  int level_offset(int mode) const {
    return kind_ == ModeKind::fock ? 0 : (cutoffs_[mode] - 1) / 2;
  }

  long stride(int mode) const { return strides_[mode]; }

  long encode(const std::vector<int>& levels) const;
  std::vector<int> decode(long index) const;
  int level_of(long index, int mode) const {
    return static_cast<int>((index / strides_[mode]) % cutoffs_[mode]);
  }
  /// Physical occupation value of `mode` in basis state `index`.
  double value_of(long index, int mode) const {
    return static_cast<double>(level_of(index, mode) - level_offset(mode));
  }

  bool operator==(const ProductBasis& other) const {
    return n_modes_ == other.n_modes_ && cutoffs_ == other.cutoffs_ &&
           kind_ == other.kind_;
  }

 private:
  int n_modes_;
  std::vector<int> cutoffs_;
  ModeKind kind_;
  long total_dim_;
  std::vector<long> strides_;
};

BasisPtr make_basis(int n_modes, const std::vector<int>& cutoffs, ModeKind kind);
BasisPtr make_fock_basis(int n_modes, int dim);
BasisPtr make_charge_basis(int n_modes, int k);
BasisPtr make_spin_basis(int n_modes, int s);

/// Sparse complex operator bound to a basis. Immutable after construction.
class SparseOp {
 public:
  SparseOp() = default;
  SparseOp(BasisPtr basis, SparseCd mat, bool hermitian = false);

  const BasisPtr& basis() const { return basis_; }
  const SparseCd& matrix() const { return mat_; }
  long dim() const { return mat_.rows(); }
  bool hermitian_flag() const { return hermitian_; }

  SparseOp adjoint() const;
  bool is_hermitian(double tol = 1e-12) const;
  VectorXcd apply(const VectorXcd& v) const;
  MatrixXcd dense() const { return MatrixXcd(mat_); }
  /// Diagonal in the product basis (no off-diagonal entries).
  bool is_diagonal() const;

  SparseOp operator+(const SparseOp& o) const;
  SparseOp operator-(const SparseOp& o) const;
  SparseOp operator*(const SparseOp& o) const;
  SparseOp scaled(Complex c) const;

 private:
  BasisPtr basis_;
  SparseCd mat_;
  bool hermitian_ = false;
};

/// Normalized amplitude vector over a ProductBasis.
struct StateVector {
  BasisPtr basis;
  VectorXcd amps;

  double norm() const { return amps.norm(); }
  void normalize() { amps /= amps.norm(); }

  /// Basis state from physical occupation values (charges, photon
  /// numbers or S^z values depending on the basis kind).
  static StateVector product_state(BasisPtr basis, const std::vector<int>& values);
};

// ---- single-mode local matrices (dense, small) ----
MatrixXcd local_destroy(int d);                 // a|m> = sqrt(m)|m-1>
MatrixXcd local_create(int d);
MatrixXcd local_number(int d);
MatrixXcd local_identity(int d);
MatrixXcd local_charge_value(int k);            // diag(-k..k)
MatrixXcd local_charge_lower(int k);            // |Q-1><Q|, hard window
MatrixXcd local_spin_z(int s);
MatrixXcd local_spin_plus(int s);
/// Normal-ordered ladder monomial (a^dag)^p a^q on a d-level mode.
MatrixXcd local_ladder_monomial(int d, int p, int q);

// ---- operator builders ----
SparseOp identity_op(BasisPtr basis);
SparseOp embed(BasisPtr basis, int mode, const MatrixXcd& local, bool hermitian = false);
/// Product of local operators; same-mode factors are multiplied in list
/// order (leftmost factor acts last).
SparseOp embed_product(BasisPtr basis,
                       const std::vector<std::pair<int, MatrixXcd>>& factors);

struct LadderOps {
  SparseOp a;
  SparseOp a_dag;
  SparseOp number;
};
/// Photonic ladder triple on a fock mode.
LadderOps ladder(int mode, BasisPtr basis);

struct ChargeOps {
  SparseOp lower;  // phi
  SparseOp raise;  // phi^dagger
  SparseOp q;      // charge value
};
ChargeOps charge_ops(int mode, BasisPtr basis);

struct SpinOps {
  SparseOp sp;
  SparseOp sm;
  SparseOp sz;
};
SpinOps spin_ops(int mode, BasisPtr basis);

/// [phi, phi^dagger] with phi = a(k)/sqrt(N0) on the 2k+1 level window
/// N0-k .. N0+k.  For k = N0 this is (1/N0) I - ((2N0+1)/N0)|2N0><2N0|;
/// other k return the general windowed form.
SparseOp truncation_defect(int k, int N0);

Complex expval(const SparseOp& A, const StateVector& psi);

/// e^{-iHt} psi for Hermitian H. Dense eigendecomposition for small
/// dimensions, Krylov otherwise; norm preserved to 1e-10.
StateVector evolve(const SparseOp& H, double t, const StateVector& psi);

/// Krylov/dense action of exp(-i t A) on v for Hermitian sparse A.
VectorXcd expmv(const SparseCd& A, double t, const VectorXcd& v, double tol = 1e-12);

// ---- symmetry-sector machinery ----
/// Indices of basis states whose diagonal value matches `value`.
std::vector<long> sector_indices(const Eigen::VectorXd& diagonal, double value,
                                 double tol = 1e-9);
SparseCd restrict_matrix(const SparseCd& mat, const std::vector<long>& indices);
VectorXcd restrict_vector(const VectorXcd& v, const std::vector<long>& indices);
VectorXcd expand_vector(const VectorXcd& v, const std::vector<long>& indices, long full_dim);

}  // namespace higgslab
