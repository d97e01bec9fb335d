#include "higgslab/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace higgslab {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

/// Vacuum-noise contraction of (S^dag)^p S^q on one mode:
/// sum_j C(p,i) C(q,j) (q-j)! (a^dag)^i a^j with i = j + p - q.
MatrixXcd phi_local(int d, int p, int q) {
  MatrixXcd out = MatrixXcd::Zero(d, d);
  for (int j = 0; j <= q; ++j) {
    int i = j + p - q;
    if (i < 0 || i > p) continue;
    out += binom(p, i) * binom(q, j) * factorial(q - j) * local_ladder_monomial(d, i, j);
  }
  return out;
}

/// Monomial in the commuting S algebra: (S^dag)^p S^q per touched mode.
using Powers = std::vector<std::tuple<int, int, int>>;  // (mode, p, q), sorted

Powers merge_powers(const Powers& a, const Powers& b) {
  Powers out;
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && std::get<0>(a[i]) < std::get<0>(b[j]))) {
      out.push_back(a[i++]);
    } else if (i == a.size() || std::get<0>(b[j]) < std::get<0>(a[i])) {
      out.push_back(b[j++]);
    } else {
      out.push_back({std::get<0>(a[i]), std::get<1>(a[i]) + std::get<1>(b[j]),
                     std::get<2>(a[i]) + std::get<2>(b[j])});
      ++i, ++j;
    }
  }
  return out;
}

/// The estimator f as monomials in the commuting S algebra. The constant
/// is carried as an empty-power monomial.
std::vector<std::pair<Powers, double>> estimator_monomials(const CostCoefficients& c) {
  std::vector<std::pair<Powers, double>> f;
  const int N = c.sites;
  f.push_back({{}, c.constant});
  for (int n = 0; n < N; ++n) {
    if (c.c1[n] != 0.0) f.push_back({{{n, 1, 1}}, c.c1[n]});
    if (c.c2[n] != 0.0) f.push_back({{{n, 2, 2}}, c.c2[n]});
  }
  for (int j = 0; j < N; ++j)
    for (int n = j + 1; n < N; ++n)
      if (c.cpair(j, n) != 0.0) f.push_back({{{j, 1, 1}, {n, 1, 1}}, c.cpair(j, n)});
  for (int n = 0; n + 1 < N; ++n) {
    if (c.chop[n] != 0.0) {
      f.push_back({{{n, 1, 0}, {n + 1, 0, 1}}, c.chop[n]});
      f.push_back({{{n, 0, 1}, {n + 1, 1, 0}}, c.chop[n]});
    }
  }
  return f;
}

SparseOp contract_to_system(BasisPtr basis,
                            const std::vector<std::pair<Powers, double>>& monomials) {
  const long dim = basis->total_dim();
  SparseCd acc(dim, dim);
  for (const auto& [powers, coeff] : monomials) {
    if (coeff == 0.0) continue;
    if (powers.empty()) {
      SparseCd id(dim, dim);
      id.setIdentity();
      acc += SparseCd(coeff * id);
      continue;
    }
    std::vector<std::pair<int, MatrixXcd>> factors;
    for (const auto& [mode, p, q] : powers)
      factors.push_back({mode, phi_local(basis->dim(mode), p, q)});
    acc += SparseCd(coeff * embed_product(basis, factors).matrix());
  }
  return SparseOp(std::move(basis), std::move(acc), true);
}

}  // namespace

CostCoefficients cost_coefficients(const ModelParams& p) {
  p.validate();
  const int N = p.sites;
  const double N0 = p.n0;

  // H_HOBM = sum alpha_n N^2 + sum blin_n N + sum_{j<n} gamma N_j N_n
  //          + t * hops + const, with the total-charge penalty folded in.
  Eigen::VectorXd alpha(N), blin(N);
  Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(N, N);
  for (int n = 1; n <= N; ++n) {
    alpha[n - 1] = 1.0 / (2.0 * p.rsq) + (N - n) / (2.0 * p.beta) + p.ell;
    blin[n - 1] = (N - n) * (2.0 * p.eps0 - N0 * (N + n - 1.0)) / (2.0 * p.beta) -
                  N0 / p.rsq - 2.0 * p.ell * N0 * N;
  }
  for (int j = 1; j <= N; ++j)
    for (int n = j + 1; n <= N; ++n)
      gamma(j - 1, n - 1) = (N - n) / p.beta + 2.0 * p.ell;
  const double hop_t = -p.rsq / (2.0 * N0);
  const double const_h =
      -p.beta * (N - 1) + p.eps0 * p.eps0 * (N - 1) / (2.0 * p.beta) +
      N0 * N0 * N / (2.0 * p.rsq) +
      N * (N - 1.0) * N0 * ((2.0 * N - 1.0) * N0 - 6.0 * p.eps0) / (12.0 * p.beta) +
      p.ell * N0 * N0 * N * N;

  CostCoefficients c;
  c.sites = N;
  c.n0 = p.n0;
  c.c2 = alpha;
  c.c1.resize(N);
  c.cpair = gamma;
  c.chop = Eigen::VectorXd::Constant(N - 1, hop_t);
  double cst = const_h;
  for (int n = 0; n < N; ++n) {
    double pair_sum = 0.0;
    for (int m = 0; m < N; ++m) {
      if (m == n) continue;
      pair_sum += gamma(std::min(m, n), std::max(m, n));
    }
    c.c1[n] = -3.0 * alpha[n] + blin[n] - pair_sum;
    cst += alpha[n] - blin[n];
  }
  for (int j = 0; j < N; ++j)
    for (int n = j + 1; n < N; ++n) cst += gamma(j, n);
  c.constant = cst;
  return c;
}

MomentVector s_moments(const StateVector& psi) {
  const BasisPtr& basis = psi.basis;
  require(basis->kind() == ModeKind::fock, "s_moments: fock basis required");
  const int N = basis->n_modes();
  MomentVector m;
  m.s1.resize(N);
  m.s2.resize(N);
  m.pair = Eigen::MatrixXd::Zero(N, N);
  m.hop.resize(std::max(0, N - 1));
  for (int n = 0; n < N; ++n) {
    m.s1[n] = expval(embed(basis, n, phi_local(basis->dim(n), 1, 1)), psi).real();
    m.s2[n] = expval(embed(basis, n, phi_local(basis->dim(n), 2, 2)), psi).real();
  }
  for (int j = 0; j < N; ++j)
    for (int n = j + 1; n < N; ++n) {
      auto op = embed_product(basis, {{j, phi_local(basis->dim(j), 1, 1)},
                                      {n, phi_local(basis->dim(n), 1, 1)}});
      m.pair(j, n) = m.pair(n, j) = expval(op, psi).real();
    }
  for (int n = 0; n + 1 < N; ++n) {
    auto op = embed_product(basis, {{n, local_create(basis->dim(n))},
                                    {n + 1, local_destroy(basis->dim(n + 1))}});
    m.hop[n] = 2.0 * expval(op, psi).real();
  }
  return m;
}

double cost_from_moments(const CostCoefficients& c, const MomentVector& m) {
  double v = c.constant;
  const int N = c.sites;
  for (int n = 0; n < N; ++n) v += c.c1[n] * m.s1[n] + c.c2[n] * m.s2[n];
  for (int j = 0; j < N; ++j)
    for (int n = j + 1; n < N; ++n) v += c.cpair(j, n) * m.pair(j, n);
  for (int n = 0; n + 1 < N; ++n) v += c.chop[n] * m.hop[n];
  return v;
}

EnergyEstimator::EnergyEstimator(const ModelParams& p, int d)
    : EnergyEstimator(cost_coefficients(p), make_fock_basis(p.sites, d)) {}

EnergyEstimator::EnergyEstimator(const CostCoefficients& c, BasisPtr basis) {
  basis_ = std::move(basis);
  require(c.sites == basis_->n_modes(), "EnergyEstimator: coefficient/basis mismatch");
  auto f = estimator_monomials(c);
  f1_ = contract_to_system(basis_, f);
  std::map<Powers, double> sq;
  for (const auto& [pa, ca] : f)
    for (const auto& [pb, cb] : f) sq[merge_powers(pa, pb)] += ca * cb;
  std::vector<std::pair<Powers, double>> f2(sq.begin(), sq.end());
  f2_ = contract_to_system(basis_, f2);
}

double EnergyEstimator::mean(const StateVector& psi) const {
  return expval(f1_, psi).real();
}

double EnergyEstimator::variance(const StateVector& psi) const {
  double m1 = expval(f1_, psi).real();
  double m2 = expval(f2_, psi).real();
  return std::max(0.0, m2 - m1 * m1);
}

double estimator_variance(const StateVector& psi, const ModelParams& p,
                          int noise_cutoff) {
  require(noise_cutoff >= 3, "estimator_variance: noise cutoff must be >= 3");
  const BasisPtr& sys = psi.basis;
  const int N = sys->n_modes();

  auto joint_variance = [&](int dh) {
    std::vector<int> dims;
    for (int n = 0; n < N; ++n) dims.push_back(sys->dim(n) + 2);
    for (int n = 0; n < N; ++n) dims.push_back(dh);
    BasisPtr joint = make_basis(2 * N, dims, ModeKind::fock);

    // Embed psi (x) |vac_noise>.
    VectorXcd big = VectorXcd::Zero(joint->total_dim());
    std::vector<int> levels(2 * N, 0);
    for (long i = 0; i < sys->total_dim(); ++i) {
      if (psi.amps[i] == Complex(0.0)) continue;
      for (int n = 0; n < N; ++n) levels[n] = sys->level_of(i, n);
      big[joint->encode(levels)] = psi.amps[i];
    }

    std::vector<SparseOp> S, Sd;
    for (int n = 0; n < N; ++n) {
      auto a = embed(joint, n, local_destroy(joint->dim(n)));
      auto hdag = embed(joint, N + n, local_create(dh));
      S.push_back(a + hdag);
      Sd.push_back(S.back().adjoint());
    }

    CostCoefficients c = cost_coefficients(p);
    VectorXcd phi = c.constant * big;
    for (int n = 0; n < N; ++n) {
      if (c.c1[n] != 0.0) phi += c.c1[n] * (Sd[n].apply(S[n].apply(big)));
      if (c.c2[n] != 0.0)
        phi += c.c2[n] * (Sd[n].apply(Sd[n].apply(S[n].apply(S[n].apply(big)))));
    }
    for (int j = 0; j < N; ++j)
      for (int n = j + 1; n < N; ++n)
        if (c.cpair(j, n) != 0.0)
          phi += c.cpair(j, n) *
                 (Sd[j].apply(S[j].apply(Sd[n].apply(S[n].apply(big)))));
    for (int n = 0; n + 1 < N; ++n)
      if (c.chop[n] != 0.0) {
        phi += c.chop[n] * (Sd[n].apply(S[n + 1].apply(big)));
        phi += c.chop[n] * (S[n].apply(Sd[n + 1].apply(big)));
      }

    double mean = big.dot(phi).real();
    return phi.squaredNorm() - mean * mean;
  };

  double v1 = joint_variance(noise_cutoff);
  double v2 = joint_variance(noise_cutoff + 2);
  if (std::abs(v2 - v1) > 0.01 * std::max(std::abs(v1), 1e-12)) {
    throw std::runtime_error(
        "estimator_variance: no convergence in noise cutoff (" +
        std::to_string(v1) + " at d_h, " + std::to_string(v2) + " at d_h+2)");
  }
  return v1;
}

double noisy_cost(const StateVector& psi, const EnergyEstimator& est,
                  const ShotModel& shot, std::mt19937_64& rng) {
  require(std::isinf(shot.shots) || shot.shots >= 1.0,
          "noisy_cost: shot count must be >= 1 or infinite");
  double mean = est.mean(psi);
  if (std::isinf(shot.shots)) return mean;
  double var = est.variance(psi);
  std::normal_distribution<double> gauss(0.0, 1.0);
  return mean + std::sqrt(var / shot.shots) * gauss(rng);
}

ShotBudget shot_budget(double gates_per_circuit, double runs, double evals_per_run,
                       double M) {
  require(gates_per_circuit > 0 && runs > 0 && evals_per_run > 0 && M > 0,
          "shot_budget: all inputs must be positive");
  ShotBudget b;
  b.total_shots = runs * evals_per_run * M;
  b.seconds = b.total_shots * gates_per_circuit * 1e-7;
  b.feasible = b.total_shots <= 1e11;
  return b;
}

HeterodyneSimulator::HeterodyneSimulator(std::vector<VectorXcd> mode_amplitudes)
    : modes_(std::move(mode_amplitudes)) {
  for (auto& m : modes_) {
    double n = m.norm();
    require(n > 0, "HeterodyneSimulator: zero mode amplitude vector");
    m /= n;
    std::vector<double> w(m.size());
    for (long i = 0; i < m.size(); ++i) w[i] = std::norm(m[i]);
    weights_.push_back(std::move(w));
  }
}

std::vector<Complex> HeterodyneSimulator::sample_shot(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<Complex> out;
  out.reserve(modes_.size());
  for (size_t k = 0; k < modes_.size(); ++k) {
    const VectorXcd& amps = modes_[k];
    const auto& w = weights_[k];
    int support = 0;
    for (double wi : w) support += wi > 0.0;
    std::discrete_distribution<int> comp(w.begin(), w.end());
    for (;;) {
      int m = comp(rng);
      double u = 0.0;
      for (int i = 0; i <= m; ++i) u -= std::log1p(-uni(rng));  // Gamma(m+1, 1)
      double phase = 2.0 * M_PI * uni(rng);
      Complex alpha = std::sqrt(u) * std::exp(Complex(0.0, phase));
      // Q(alpha) / (support * proposal): both share e^{-|a|^2}/pi.
      Complex poly = 0.0;
      double mono = 1.0;  // |alpha|^m / sqrt(m!)
      double prop = 0.0;
      Complex ac = std::conj(alpha);
      Complex ac_pow = 1.0;
      for (long i = 0; i < amps.size(); ++i) {
        if (i > 0) {
          mono *= std::abs(alpha) / std::sqrt(static_cast<double>(i));
          ac_pow *= ac / std::sqrt(static_cast<double>(i));
        }
        poly += amps[i] * ac_pow;
        prop += w[i] * mono * mono;
      }
      double ratio = std::norm(poly) / (support * prop);
      if (uni(rng) <= ratio) {
        out.push_back(alpha);
        break;
      }
    }
  }
  return out;
}

double estimator_shot_value(const CostCoefficients& c, const std::vector<Complex>& s) {
  const int N = c.sites;
  require(static_cast<int>(s.size()) == N, "estimator_shot_value: one outcome per mode");
  double v = c.constant;
  for (int n = 0; n < N; ++n) {
    double u = std::norm(s[n]);
    v += c.c1[n] * u + c.c2[n] * u * u;
  }
  for (int j = 0; j < N; ++j)
    for (int n = j + 1; n < N; ++n) v += c.cpair(j, n) * std::norm(s[j]) * std::norm(s[n]);
  for (int n = 0; n + 1 < N; ++n)
    v += c.chop[n] * 2.0 * (std::conj(s[n]) * s[n + 1]).real();
  return v;
}

}  // namespace higgslab
