#pragma once

#include <optional>

#include "higgslab/model.hpp"

namespace higgslab {

/// Open-boundary MPS with real tensors; tensors[k][phys] is the
/// chi_left x chi_right matrix of site k.
struct MpsState {
  std::vector<std::vector<Eigen::MatrixXd>> tensors;
  int local_dim = 0;

  int n_sites() const { return static_cast<int>(tensors.size()); }
  long max_bond() const;
  double norm() const;

  static MpsState product_state(int n_sites, int local_dim, const std::vector<int>& levels);
  static MpsState random_state(int n_sites, int local_dim, int chi, std::uint64_t seed);
};

/// MPO as per-site sparse channel blocks; bl/br are bond channel indices
/// already trimmed to the boundary bond dimensions.
struct Mpo {
  struct Block {
    int bl = 0;
    int br = 0;
    Eigen::MatrixXd op;
  };
  std::vector<std::vector<Block>> sites;
  std::vector<int> bond_dims;  // size n_sites+1, boundaries are 1
  int local_dim = 0;

  int n_sites() const { return static_cast<int>(sites.size()); }
};

/// Exact MPO of the spin-truncated Hamiltonian (long-range charge-charge
/// couplings via one accumulated-charge channel; bond dimension 5).
Mpo build_mpo(const ModelParams& p, int s);

/// (sum_n S^z_n)^2 as a bond-dimension-3 MPO (sector-purity checks).
Mpo build_total_sz_sq_mpo(int n_sites, int s);

/// Dense matrix of an MPO (test oracle; sites <= 6 or so).
Eigen::MatrixXd mpo_dense(const Mpo& mpo);

double expect_mpo(const MpsState& psi, const Mpo& mpo);
std::vector<double> sz_profile(const MpsState& psi);

struct DmrgOptions {
  int chi = 32;
  double sweep_tol = 1e-9;
  int max_sweeps = 50;
  std::uint64_t seed = 7;
};

struct DmrgResult {
  double energy = 0.0;
  MpsState state;
  bool converged = false;
  std::vector<double> sweep_energies;
};

/// Two-site DMRG ground-state search with singular-value truncation to
/// options.chi; terminates when the energy change per sweep drops below
/// sweep_tol or after max_sweeps (returned unconverged with the last two
/// sweep energies in sweep_energies).
DmrgResult dmrg(const Mpo& mpo, const DmrgOptions& options,
                std::optional<MpsState> initial = std::nullopt);

/// chi -> infinity estimate: value at the largest chi, uncertainty
/// bracketed by the result at the next chi down the ladder.
struct ChiExtrapolation {
  double value = 0.0;
  double uncertainty = 0.0;
  bool single_chi = false;
};
ChiExtrapolation chi_extrapolate(const std::vector<std::pair<int, double>>& results);

struct MpsSweepConfig {
  std::vector<int> n_list{4};
  int s = 1;
  std::vector<int> chi_list{16, 32};
  double rsq = 0.3;
  double beta = 1.0;
  std::vector<double> eps0_grid;
  double ell = -1.0;  // negative: use the 3N default
  double sweep_tol = 1e-9;
  int max_sweeps = 50;
  std::uint64_t seed = 11;
};

struct MpsSweepRow {
  int sites = 0;
  int s = 1;
  double rsq = 0.0;
  double beta = 1.0;
  double eps0 = 0.0;
  int chi_max = 0;
  double energy_density = 0.0;
  double energy_err = 0.0;
  double efd = 0.0;
  double efd_err = 0.0;
  bool converged = true;
};

/// Ground-state sweep over the background-field grid for every lattice
/// size; per point the DMRG runs from a warm start and both competing
/// product seeds, keeping the lowest energy and extrapolating in chi.
std::vector<MpsSweepRow> mps_sweep(const MpsSweepConfig& cfg);

struct JumpLocation {
  double eps0 = 0.0;
  double error = 0.0;
};

/// First discontinuity of an EFD curve: midpoint of the first adjacent
/// pair differing by more than half the unit jump; none when smooth.
std::optional<JumpLocation> jump_location(const std::vector<std::pair<double, double>>& curve);

}  // namespace higgslab
