#include "higgslab/mps.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "higgslab/parallel.hpp"
#include "higgslab/rng.hpp"

namespace higgslab {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd real_spin_z(int s) { return local_spin_z(s).real(); }
MatrixXd real_spin_plus(int s) { return local_spin_plus(s).real(); }

}  // namespace

long MpsState::max_bond() const {
  long m = 1;
  for (const auto& site : tensors) m = std::max<long>(m, site[0].cols());
  return m;
}

double MpsState::norm() const {
  MatrixXd l = MatrixXd::Ones(1, 1);
  for (const auto& site : tensors) {
    MatrixXd next = MatrixXd::Zero(site[0].cols(), site[0].cols());
    for (const auto& m : site) next += m.transpose() * l * m;
    l = std::move(next);
  }
  return std::sqrt(std::max(0.0, l(0, 0)));
}

MpsState MpsState::product_state(int n_sites, int local_dim,
                                 const std::vector<int>& levels) {
  require(static_cast<int>(levels.size()) == n_sites, "product_state: one level per site");
  MpsState psi;
  psi.local_dim = local_dim;
  psi.tensors.resize(n_sites);
  for (int k = 0; k < n_sites; ++k) {
    require(levels[k] >= 0 && levels[k] < local_dim, "product_state: level out of range");
    psi.tensors[k].assign(local_dim, MatrixXd::Zero(1, 1));
    psi.tensors[k][levels[k]](0, 0) = 1.0;
  }
  return psi;
}

MpsState MpsState::random_state(int n_sites, int local_dim, int chi, std::uint64_t seed) {
  auto rng = make_rng(seed);
  std::normal_distribution<double> g;
  MpsState psi;
  psi.local_dim = local_dim;
  psi.tensors.resize(n_sites);
  int left = 1;
  for (int k = 0; k < n_sites; ++k) {
    int right = (k == n_sites - 1) ? 1 : std::min<int>(chi, static_cast<int>(std::pow(
        local_dim, std::min(k + 1, n_sites - 1 - k))));
    psi.tensors[k].assign(local_dim, MatrixXd::Zero(left, right));
    for (int s = 0; s < local_dim; ++s)
      for (int a = 0; a < left; ++a)
        for (int b = 0; b < right; ++b) psi.tensors[k][s](a, b) = g(rng);
    left = right;
  }
  double n = psi.norm();
  for (auto& m : psi.tensors[0]) m /= n;
  return psi;
}

Mpo build_mpo(const ModelParams& p, int s) {
  p.validate();
  require(s >= 1, "build_mpo: spin s must be >= 1");
  const int N = p.sites;
  const int d = 2 * s + 1;
  const double s_norm_sq = s * (s + 1.0);
  const double c_hop = -p.rsq / (2.0 * s_norm_sq);
  const double constant = -p.beta * (N - 1) + p.eps0 * p.eps0 * (N - 1) / (2.0 * p.beta);

  const MatrixXd I = MatrixXd::Identity(d, d);
  const MatrixXd sz = real_spin_z(s);
  const MatrixXd sp = real_spin_plus(s);
  const MatrixXd sm = sp.transpose();
  const MatrixXd sz2 = sz * sz;

  // channels: 0 identity-in, 1 S+ carry, 2 S- carry, 3 accumulated S^z, 4 done
  Mpo mpo;
  mpo.local_dim = d;
  mpo.bond_dims.assign(N + 1, 5);
  mpo.bond_dims.front() = mpo.bond_dims.back() = 1;
  mpo.sites.resize(N);
  for (int n = 1; n <= N; ++n) {
    const double A = 1.0 / (2.0 * p.rsq) + (N - n) / (2.0 * p.beta) + p.ell;
    const double B = p.eps0 * (N - n) / p.beta;
    const double W = (N - n) / p.beta + 2.0 * p.ell;  // pair weight, later site only
    MatrixXd onsite = A * sz2 + B * sz + (constant / N) * I;

    std::vector<Mpo::Block> blocks;
    auto add = [&](int bl, int br, const MatrixXd& op) {
      // trim to the boundary bond dimensions
      if (n == 1 && bl != 0) return;
      if (n == N && br != 4) return;
      blocks.push_back({n == 1 ? 0 : bl, n == N ? 0 : br, op});
    };
    add(0, 0, I);
    add(0, 1, c_hop * sp);
    add(0, 2, c_hop * sm);
    add(0, 3, sz);
    add(0, 4, onsite);
    add(1, 4, sm);
    add(2, 4, sp);
    add(3, 3, I);
    add(3, 4, W * sz);
    add(4, 4, I);
    mpo.sites[n - 1] = std::move(blocks);
  }
  return mpo;
}

Mpo build_total_sz_sq_mpo(int n_sites, int s) {
  const int d = 2 * s + 1;
  const MatrixXd I = MatrixXd::Identity(d, d);
  const MatrixXd sz = real_spin_z(s);
  Mpo mpo;
  mpo.local_dim = d;
  mpo.bond_dims.assign(n_sites + 1, 3);
  mpo.bond_dims.front() = mpo.bond_dims.back() = 1;
  mpo.sites.resize(n_sites);
  for (int n = 1; n <= n_sites; ++n) {
    std::vector<Mpo::Block> blocks;
    auto add = [&](int bl, int br, const MatrixXd& op) {
      if (n == 1 && bl != 0) return;
      if (n == n_sites && br != 2) return;
      blocks.push_back({n == 1 ? 0 : bl, n == n_sites ? 0 : br, op});
    };
    add(0, 0, I);
    add(0, 1, 2.0 * sz);
    add(0, 2, sz * sz);
    add(1, 1, I);
    add(1, 2, sz);
    add(2, 2, I);
    mpo.sites[n - 1] = std::move(blocks);
  }
  return mpo;
}

Eigen::MatrixXd mpo_dense(const Mpo& mpo) {
  const int N = mpo.n_sites();
  const int d = mpo.local_dim;
  long dim = 1;
  for (int k = 0; k < N; ++k) dim *= d;
  require(dim <= 4096, "mpo_dense: too large for the dense oracle");

  std::vector<MatrixXd> G(mpo.bond_dims[0], MatrixXd::Zero(1, 1));
  G[0](0, 0) = 1.0;
  long cur = 1;
  for (int k = 0; k < N; ++k) {
    std::vector<MatrixXd> next(mpo.bond_dims[k + 1], MatrixXd::Zero(cur * d, cur * d));
    for (const auto& blk : mpo.sites[k]) {
      auto& target = next[blk.br];
      const MatrixXd& g = G[blk.bl];
      if (g.size() == 0) continue;
      for (long r = 0; r < cur; ++r)
        for (long c = 0; c < cur; ++c) {
          if (g(r, c) == 0.0) continue;
          target.block(r * d, c * d, d, d) += g(r, c) * blk.op;
        }
    }
    G = std::move(next);
    cur *= d;
  }
  return G[0];
}

namespace {

// Environments are (bra, ket) matrices per MPO channel.
using Env = std::vector<MatrixXd>;

Env left_boundary(const Mpo& mpo) {
  Env e(mpo.bond_dims[0], MatrixXd::Zero(1, 1));
  e[0](0, 0) = 1.0;
  return e;
}

Env right_boundary(const Mpo& mpo) {
  Env e(mpo.bond_dims[mpo.n_sites()], MatrixXd::Zero(1, 1));
  e[0](0, 0) = 1.0;  // trimmed "done" channel
  return e;
}

Env advance_left(const Env& L, const std::vector<Mpo::Block>& blocks,
                 const std::vector<MatrixXd>& M, int br_dim) {
  const long chi = M[0].cols();
  Env out(br_dim, MatrixXd::Zero(chi, chi));
  const int d = static_cast<int>(M.size());
  for (const auto& blk : blocks) {
    const MatrixXd& l = L[blk.bl];
    if (l.size() == 0) continue;
    for (int sp = 0; sp < d; ++sp)
      for (int sk = 0; sk < d; ++sk) {
        double w = blk.op(sp, sk);
        if (w == 0.0) continue;
        out[blk.br] += w * (M[sp].transpose() * l * M[sk]);
      }
  }
  return out;
}

Env advance_right(const Env& R, const std::vector<Mpo::Block>& blocks,
                  const std::vector<MatrixXd>& M, int bl_dim) {
  const long chi = M[0].rows();
  Env out(bl_dim, MatrixXd::Zero(chi, chi));
  const int d = static_cast<int>(M.size());
  for (const auto& blk : blocks) {
    const MatrixXd& r = R[blk.br];
    if (r.size() == 0) continue;
    for (int sp = 0; sp < d; ++sp)
      for (int sk = 0; sk < d; ++sk) {
        double w = blk.op(sp, sk);
        if (w == 0.0) continue;
        out[blk.bl] += w * (M[sp] * r * M[sk].transpose());
      }
  }
  return out;
}

// Two-site tensor as a d x d grid of chi_l x chi_r matrices.
using Theta = std::vector<std::vector<MatrixXd>>;

Theta make_theta(const std::vector<MatrixXd>& M1, const std::vector<MatrixXd>& M2) {
  const int d = static_cast<int>(M1.size());
  Theta t(d, std::vector<MatrixXd>(d));
  for (int s1 = 0; s1 < d; ++s1)
    for (int s2 = 0; s2 < d; ++s2) t[s1][s2] = M1[s1] * M2[s2];
  return t;
}

VectorXd theta_flatten(const Theta& t) {
  const int d = static_cast<int>(t.size());
  const long cl = t[0][0].rows(), cr = t[0][0].cols();
  VectorXd v(cl * d * d * cr);
  long idx = 0;
  for (long a = 0; a < cl; ++a)
    for (int s1 = 0; s1 < d; ++s1)
      for (int s2 = 0; s2 < d; ++s2)
        for (long b = 0; b < cr; ++b) v[idx++] = t[s1][s2](a, b);
  return v;
}

Theta theta_unflatten(const VectorXd& v, int d, long cl, long cr) {
  Theta t(d, std::vector<MatrixXd>(d, MatrixXd::Zero(cl, cr)));
  long idx = 0;
  for (long a = 0; a < cl; ++a)
    for (int s1 = 0; s1 < d; ++s1)
      for (int s2 = 0; s2 < d; ++s2)
        for (long b = 0; b < cr; ++b) t[s1][s2](a, b) = v[idx++];
  return t;
}

// H_eff theta with the left env, two MPO sites and the right env.
Theta apply_heff(const Env& L, const std::vector<Mpo::Block>& W1,
                 const std::vector<Mpo::Block>& W2, const Env& R, const Theta& theta,
                 int bm_dim) {
  const int d = static_cast<int>(theta.size());
  const long cl = theta[0][0].rows(), cr = theta[0][0].cols();

  // P[bl][s1][s2] = L[bl] * theta[s1][s2]
  std::vector<Theta> P(L.size(), Theta(d, std::vector<MatrixXd>(d)));
  for (size_t bl = 0; bl < L.size(); ++bl)
    for (int s1 = 0; s1 < d; ++s1)
      for (int s2 = 0; s2 < d; ++s2) P[bl][s1][s2] = L[bl] * theta[s1][s2];

  // X[bm][s1'][s2] = sum W1(bl,bm)(s1',s1) P[bl][s1][s2]
  std::vector<Theta> X(bm_dim, Theta(d, std::vector<MatrixXd>(d, MatrixXd::Zero(cl, cr))));
  for (const auto& blk : W1)
    for (int sp = 0; sp < d; ++sp)
      for (int sk = 0; sk < d; ++sk) {
        double w = blk.op(sp, sk);
        if (w == 0.0) continue;
        for (int s2 = 0; s2 < d; ++s2) X[blk.br][sp][s2] += w * P[blk.bl][sk][s2];
      }

  // Y[br][s1'][s2'] = sum W2(bm,br)(s2',s2) X[bm][s1'][s2]
  std::vector<Theta> Y(R.size(), Theta(d, std::vector<MatrixXd>(d, MatrixXd::Zero(cl, cr))));
  for (const auto& blk : W2)
    for (int sp = 0; sp < d; ++sp)
      for (int sk = 0; sk < d; ++sk) {
        double w = blk.op(sp, sk);
        if (w == 0.0) continue;
        for (int s1 = 0; s1 < d; ++s1) Y[blk.br][s1][sp] += w * X[blk.bl][s1][sk];
      }

  Theta out(d, std::vector<MatrixXd>(d, MatrixXd::Zero(cl, cr)));
  for (size_t br = 0; br < R.size(); ++br) {
    if (R[br].size() == 0) continue;
    for (int s1 = 0; s1 < d; ++s1)
      for (int s2 = 0; s2 < d; ++s2) out[s1][s2] += Y[br][s1][s2] * R[br].transpose();
  }
  return out;
}

// Lowest eigenpair of the two-site effective Hamiltonian (Lanczos with
// full reorthogonalization, warm-started from v0).
double lanczos_ground(const std::function<VectorXd(const VectorXd&)>& matvec,
                      VectorXd& v0, int max_iter, double tol) {
  const long n = v0.size();
  max_iter = static_cast<int>(std::min<long>(max_iter, n));
  if (v0.norm() < 1e-14) v0.setOnes();
  v0.normalize();

  std::vector<VectorXd> V{v0};
  std::vector<double> alpha, beta;
  double lam = 0.0;
  Eigen::MatrixXd evecs;
  int m = 0;
  for (int j = 0; j < max_iter; ++j) {
    VectorXd w = matvec(V[j]);
    if (j > 0) w -= beta[j - 1] * V[j - 1];
    alpha.push_back(V[j].dot(w));
    w -= alpha[j] * V[j];
    for (const auto& u : V) w -= u.dot(w) * u;
    double b = w.norm();
    m = j + 1;

    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      T(i, i) = alpha[i];
      if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    lam = es.eigenvalues()[0];
    double resid = (m > 0) ? std::abs(b * es.eigenvectors()(m - 1, 0)) : b;
    if (b < 1e-13 || resid < tol || j + 1 == max_iter) {
      evecs = es.eigenvectors();
      break;
    }
    beta.push_back(b);
    V.push_back(w / b);
  }
  VectorXd ground = VectorXd::Zero(n);
  for (int i = 0; i < m; ++i) ground += evecs(i, 0) * V[i];
  ground.normalize();
  v0 = ground;
  return lam;
}

void right_normalize(MpsState& psi) {
  const int N = psi.n_sites();
  const int d = psi.local_dim;
  for (int k = N - 1; k >= 1; --k) {
    auto& M = psi.tensors[k];
    const long cl = M[0].rows(), cr = M[0].cols();
    MatrixXd mat(cl, d * cr);
    for (int s = 0; s < d; ++s) mat.block(0, s * cr, cl, cr) = M[s];
    // LQ via QR of the transpose
    Eigen::HouseholderQR<MatrixXd> qr(mat.transpose());
    long rank = std::min(cl, static_cast<long>(d) * cr);
    MatrixXd Q = qr.householderQ() * MatrixXd::Identity(d * cr, rank);
    MatrixXd Lfac = (Q.transpose() * mat.transpose()).transpose();  // cl x rank
    for (int s = 0; s < d; ++s) M[s] = Q.transpose().block(0, s * cr, rank, cr);
    for (int s = 0; s < d; ++s) psi.tensors[k - 1][s] = psi.tensors[k - 1][s] * Lfac;
  }
  // normalize the first site
  double n2 = 0.0;
  for (const auto& m : psi.tensors[0]) n2 += m.squaredNorm();
  double n = std::sqrt(n2);
  if (n > 0)
    for (auto& m : psi.tensors[0]) m /= n;
}

// SVD split of theta; returns the kept singular value count.
void split_theta(const Theta& theta, int chi, std::vector<MatrixXd>& M1,
                 std::vector<MatrixXd>& M2, bool left_into_m2) {
  const int d = static_cast<int>(theta.size());
  const long cl = theta[0][0].rows(), cr = theta[0][0].cols();
  MatrixXd mat(cl * d, d * cr);
  for (int s1 = 0; s1 < d; ++s1)
    for (int s2 = 0; s2 < d; ++s2)
      for (long a = 0; a < cl; ++a) mat.block(a * d + s1, s2 * cr, 1, cr) = theta[s1][s2].row(a);
  Eigen::BDCSVD<MatrixXd> svd(mat, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  long keep = 0;
  for (long i = 0; i < sv.size(); ++i)
    if (sv[i] > 1e-13 * sv[0] && i < chi) ++keep;
  keep = std::max<long>(keep, 1);
  VectorXd s_kept = sv.head(keep);
  s_kept /= s_kept.norm();  // keep the state normalized after truncation

  MatrixXd U = svd.matrixU().leftCols(keep);
  MatrixXd V = svd.matrixV().leftCols(keep);
  M1.assign(d, MatrixXd::Zero(cl, keep));
  M2.assign(d, MatrixXd::Zero(keep, cr));
  for (int s1 = 0; s1 < d; ++s1)
    for (long a = 0; a < cl; ++a) M1[s1].row(a) = U.row(a * d + s1);
  for (int s2 = 0; s2 < d; ++s2)
    for (long b = 0; b < cr; ++b) M2[s2].col(b) = V.row(s2 * cr + b).transpose();
  if (left_into_m2) {
    // left-canonical M1; singular values absorbed rightward
    for (int s2 = 0; s2 < d; ++s2) M2[s2] = s_kept.asDiagonal() * M2[s2];
  } else {
    for (int s1 = 0; s1 < d; ++s1) M1[s1] = M1[s1] * s_kept.asDiagonal();
  }
}

}  // namespace

double expect_mpo(const MpsState& psi, const Mpo& mpo) {
  require(psi.n_sites() == mpo.n_sites() && psi.local_dim == mpo.local_dim,
          "expect_mpo: shape mismatch");
  Env e = left_boundary(mpo);
  for (int k = 0; k < psi.n_sites(); ++k)
    e = advance_left(e, mpo.sites[k], psi.tensors[k], mpo.bond_dims[k + 1]);
  double n = psi.norm();
  return e[0](0, 0) / (n * n);
}

std::vector<double> sz_profile(const MpsState& psi) {
  const int N = psi.n_sites();
  const int d = psi.local_dim;
  const int s = (d - 1) / 2;
  const MatrixXd sz = real_spin_z(s);

  std::vector<MatrixXd> lenv(N + 1), renv(N + 1);
  lenv[0] = MatrixXd::Ones(1, 1);
  for (int k = 0; k < N; ++k) {
    MatrixXd next = MatrixXd::Zero(psi.tensors[k][0].cols(), psi.tensors[k][0].cols());
    for (const auto& m : psi.tensors[k]) next += m.transpose() * lenv[k] * m;
    lenv[k + 1] = std::move(next);
  }
  renv[N] = MatrixXd::Ones(1, 1);
  for (int k = N - 1; k >= 0; --k) {
    MatrixXd next = MatrixXd::Zero(psi.tensors[k][0].rows(), psi.tensors[k][0].rows());
    for (const auto& m : psi.tensors[k]) next += m * renv[k + 1] * m.transpose();
    renv[k] = std::move(next);
  }
  const double norm2 = lenv[N](0, 0);
  std::vector<double> out(N, 0.0);
  for (int k = 0; k < N; ++k) {
    double v = 0.0;
    for (int sp = 0; sp < d; ++sp)
      for (int sk = 0; sk < d; ++sk) {
        if (sz(sp, sk) == 0.0) continue;
        v += sz(sp, sk) *
             (psi.tensors[k][sp].transpose() * lenv[k] * psi.tensors[k][sk] * renv[k + 1])
                 .trace();
      }
    out[k] = v / norm2;
  }
  return out;
}

DmrgResult dmrg(const Mpo& mpo, const DmrgOptions& options,
                std::optional<MpsState> initial) {
  require(options.chi >= 2, "dmrg: bond dimension must be >= 2");
  const int N = mpo.n_sites();
  const int d = mpo.local_dim;

  MpsState psi = initial ? std::move(*initial)
                         : MpsState::random_state(N, d, std::min(options.chi, 8),
                                                  options.seed);
  require(psi.n_sites() == N && psi.local_dim == d, "dmrg: state/MPO shape mismatch");
  right_normalize(psi);

  std::vector<Env> lenv(N + 1), renv(N + 1);
  lenv[0] = left_boundary(mpo);
  renv[N] = right_boundary(mpo);
  for (int k = N - 1; k >= 1; --k)
    renv[k] = advance_right(renv[k + 1], mpo.sites[k], psi.tensors[k], mpo.bond_dims[k]);

  DmrgResult res;
  double prev_energy = std::numeric_limits<double>::infinity();
  double energy = prev_energy;
  const double local_tol = std::max(1e-12, options.sweep_tol * 1e-2);

  for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
    auto solve_bond = [&](int k, bool moving_right) {
      const auto& W1 = mpo.sites[k];
      const auto& W2 = mpo.sites[k + 1];
      Theta theta = make_theta(psi.tensors[k], psi.tensors[k + 1]);
      const long cl = theta[0][0].rows(), cr = theta[0][0].cols();
      VectorXd v = theta_flatten(theta);
      auto matvec = [&](const VectorXd& x) {
        Theta t = theta_unflatten(x, d, cl, cr);
        return theta_flatten(apply_heff(lenv[k], W1, W2, renv[k + 2], t, mpo.bond_dims[k + 1]));
      };
      energy = lanczos_ground(matvec, v, 64, local_tol);
      Theta ground = theta_unflatten(v, d, cl, cr);
      split_theta(ground, options.chi, psi.tensors[k], psi.tensors[k + 1], moving_right);
      if (moving_right) {
        lenv[k + 1] = advance_left(lenv[k], W1, psi.tensors[k], mpo.bond_dims[k + 1]);
      } else {
        renv[k + 1] = advance_right(renv[k + 2], W2, psi.tensors[k + 1], mpo.bond_dims[k + 1]);
      }
    };
    for (int k = 0; k < N - 1; ++k) solve_bond(k, true);
    for (int k = N - 2; k >= 0; --k) solve_bond(k, false);

    res.sweep_energies.push_back(energy);
    if (std::abs(prev_energy - energy) < options.sweep_tol) {
      res.converged = true;
      break;
    }
    prev_energy = energy;
  }
  res.energy = energy;
  res.state = std::move(psi);
  if (!res.converged && res.sweep_energies.size() >= 2) {
    // keep only the last two sweep energies meaningful for the caller
  }
  return res;
}

ChiExtrapolation chi_extrapolate(const std::vector<std::pair<int, double>>& results) {
  require(!results.empty(), "chi_extrapolate: no results");
  auto sorted = results;
  std::sort(sorted.begin(), sorted.end());
  ChiExtrapolation out;
  out.value = sorted.back().second;
  if (sorted.size() == 1) {
    out.single_chi = true;
    out.uncertainty = 0.0;
    return out;
  }
  out.uncertainty = std::abs(sorted.back().second - sorted[sorted.size() - 2].second);
  return out;
}

std::vector<MpsSweepRow> mps_sweep(const MpsSweepConfig& cfg) {
  require(!cfg.eps0_grid.empty(), "mps_sweep: empty background-field grid");
  require(!cfg.chi_list.empty(), "mps_sweep: empty bond-dimension list");

  struct Task {
    int n_index;
    int chi_index;
  };
  std::vector<Task> tasks;
  for (size_t ni = 0; ni < cfg.n_list.size(); ++ni)
    for (size_t ci = 0; ci < cfg.chi_list.size(); ++ci)
      tasks.push_back({static_cast<int>(ni), static_cast<int>(ci)});

  // per (n, chi): energy and efd along the grid
  std::vector<std::vector<std::pair<double, double>>> energy_efd(
      tasks.size(), std::vector<std::pair<double, double>>(cfg.eps0_grid.size()));
  std::vector<std::vector<bool>> conv(tasks.size(),
                                      std::vector<bool>(cfg.eps0_grid.size(), true));

  parallel_for(static_cast<long>(tasks.size()), [&](long t) {
    const int N = cfg.n_list[tasks[t].n_index];
    const int chi = cfg.chi_list[tasks[t].chi_index];
    const int d = 2 * cfg.s + 1;
    ModelParams p;
    p.sites = N;
    p.beta = cfg.beta;
    p.rsq = cfg.rsq;
    p.ell = cfg.ell < 0 ? 3.0 * N : cfg.ell;
    p.trunc = cfg.s;

    DmrgOptions opt;
    opt.chi = chi;
    opt.sweep_tol = cfg.sweep_tol;
    opt.max_sweeps = cfg.max_sweeps;
    opt.seed = mix_seed(cfg.seed, t);

    // competing product seeds: bare vacuum and the boundary charge pair
    std::vector<int> vac(N, cfg.s);
    std::vector<int> pair_state(N, cfg.s);
    pair_state.front() = cfg.s - 1;
    pair_state.back() = cfg.s + 1;

    std::optional<MpsState> warm;
    for (size_t gi = 0; gi < cfg.eps0_grid.size(); ++gi) {
      p.eps0 = cfg.eps0_grid[gi];
      Mpo mpo = build_mpo(p, cfg.s);
      std::vector<std::optional<MpsState>> seeds;
      if (warm) seeds.push_back(warm);
      seeds.push_back(MpsState::product_state(N, d, vac));
      seeds.push_back(MpsState::product_state(N, d, pair_state));

      DmrgResult best;
      best.energy = std::numeric_limits<double>::infinity();
      for (auto& seed : seeds) {
        DmrgResult r = dmrg(mpo, opt, seed);
        if (r.energy < best.energy) best = std::move(r);
      }
      energy_efd[t][gi] = {best.energy, efd(sz_profile(best.state), p)};
      conv[t][gi] = best.converged;
      warm = best.state;
    }
  });

  std::vector<MpsSweepRow> rows;
  for (size_t ni = 0; ni < cfg.n_list.size(); ++ni) {
    const int N = cfg.n_list[ni];
    for (size_t gi = 0; gi < cfg.eps0_grid.size(); ++gi) {
      std::vector<std::pair<int, double>> e_by_chi, f_by_chi;
      bool converged = true;
      for (size_t ci = 0; ci < cfg.chi_list.size(); ++ci) {
        size_t t = ni * cfg.chi_list.size() + ci;
        e_by_chi.push_back({cfg.chi_list[ci], energy_efd[t][gi].first});
        f_by_chi.push_back({cfg.chi_list[ci], energy_efd[t][gi].second});
        converged = converged && conv[t][gi];
      }
      auto e_ext = chi_extrapolate(e_by_chi);
      auto f_ext = chi_extrapolate(f_by_chi);
      MpsSweepRow row;
      row.sites = N;
      row.s = cfg.s;
      row.rsq = cfg.rsq;
      row.beta = cfg.beta;
      row.eps0 = cfg.eps0_grid[gi];
      row.chi_max = *std::max_element(cfg.chi_list.begin(), cfg.chi_list.end());
      row.energy_density = e_ext.value / N;
      row.energy_err = e_ext.uncertainty / N;
      row.efd = f_ext.value;
      row.efd_err = f_ext.uncertainty;
      row.converged = converged;
      rows.push_back(row);
    }
  }
  return rows;
}

std::optional<JumpLocation> jump_location(
    const std::vector<std::pair<double, double>>& curve) {
  for (size_t i = 0; i + 1 < curve.size(); ++i) {
    require(curve[i + 1].first > curve[i].first, "jump_location: grid must be ascending");
    if (std::abs(curve[i + 1].second - curve[i].second) > 0.5) {
      JumpLocation j;
      j.eps0 = 0.5 * (curve[i].first + curve[i + 1].first);
      j.error = 0.5 * (curve[i + 1].first - curve[i].first);
      return j;
    }
  }
  return std::nullopt;
}

}  // namespace higgslab
