#pragma once

#include <optional>

#include "higgslab/model.hpp"

namespace higgslab {

/// Ascending eigenvalues with (optionally) the matching eigenvectors as
/// columns.
struct Spectrum {
  Eigen::VectorXd eigenvalues;
  MatrixXcd eigenvectors;  // may have zero columns
};

/// Lowest-k eigenpairs of a Hermitian sparse matrix. Dense solver up to
/// dimension 2000, Lanczos with full reorthogonalization above.
Spectrum lowest_eigs(const SparseCd& mat, int k, bool want_vectors = true,
                     std::uint64_t seed = 1234);

/// Lowest-k eigenpairs of H, optionally restricted to a total-charge
/// sector (block extraction by occupation filtering, not by penalty).
/// Returned eigenvectors live on the full basis.
Spectrum low_spectrum(const SparseOp& H, int k,
                      std::optional<double> charge_sector = std::nullopt,
                      int n0 = 0);

enum class Formulation { effective, hobm, spin, full_gauge };

struct EdSweepPoint {
  double eps0;
  double energy;
  double efd;
  double gap;
};

/// Ground-state data of the chosen formulation over a background-field
/// grid, restricted to the zero-total-charge sector.
std::vector<EdSweepPoint> ed_sweep(ModelParams base, Formulation form,
                                   const std::vector<double>& eps0_grid);

/// Per-site charge expectations <Q_n> of a state (kind-aware: N - N0 on
/// fock bases).
std::vector<double> charge_profile(const StateVector& psi, int n0 = 0);

}  // namespace higgslab
