#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "higgslab/exact.hpp"
#include "higgslab/measurement.hpp"
#include "higgslab/rng.hpp"

using namespace higgslab;

namespace {

StateVector random_state(BasisPtr basis, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  VectorXcd v(basis->total_dim());
  for (long i = 0; i < v.size(); ++i) v[i] = Complex(g(rng), g(rng));
  v.normalize();
  return StateVector{basis, v};
}

// Explicit system (x) vacuum-noise moments for one or two modes; the
// oracle the corrected identity is checked against.
struct JointOracle {
  BasisPtr joint;
  int n_sys;
  std::vector<SparseOp> S, Sd;
  VectorXcd embed_state(const StateVector& psi) const {
    VectorXcd big = VectorXcd::Zero(joint->total_dim());
    std::vector<int> levels(2 * n_sys, 0);
    for (long i = 0; i < psi.basis->total_dim(); ++i) {
      if (psi.amps[i] == Complex(0.0)) continue;
      for (int n = 0; n < n_sys; ++n) levels[n] = psi.basis->level_of(i, n);
      big[joint->encode(levels)] = psi.amps[i];
    }
    return big;
  }
};

JointOracle make_oracle(const BasisPtr& sys, int headroom, int dh) {
  JointOracle o;
  o.n_sys = sys->n_modes();
  std::vector<int> dims;
  for (int n = 0; n < o.n_sys; ++n) dims.push_back(sys->dim(n) + headroom);
  for (int n = 0; n < o.n_sys; ++n) dims.push_back(dh);
  o.joint = make_basis(2 * o.n_sys, dims, ModeKind::fock);
  for (int n = 0; n < o.n_sys; ++n) {
    auto a = embed(o.joint, n, local_destroy(o.joint->dim(n)));
    auto hdag = embed(o.joint, o.n_sys + n, local_create(dh));
    o.S.push_back(a + hdag);
    o.Sd.push_back(o.S.back().adjoint());
  }
  return o;
}

}  // namespace

TEST_CASE("signal moments: frozen single-mode values") {
  auto b = make_fock_basis(1, 5);
  auto vac = StateVector::product_state(b, {0});
  auto one = StateVector::product_state(b, {1});
  auto mv = s_moments(vac);
  CHECK(mv.s1[0] == doctest::Approx(1.0));
  CHECK(mv.s2[0] == doctest::Approx(2.0));
  auto m1 = s_moments(one);
  CHECK(m1.s1[0] == doctest::Approx(2.0));
  CHECK(m1.s2[0] == doctest::Approx(6.0));
}

TEST_CASE("signal moments: cross term on |1> x |2>") {
  auto b = make_fock_basis(2, 5);
  auto psi = StateVector::product_state(b, {1, 2});
  auto m = s_moments(psi);
  CHECK(m.pair(0, 1) == doctest::Approx(6.0));  // <N1 N2>+<N1>+<N2>+1
}

TEST_CASE("moment identity against the explicit noise-mode oracle") {
  // Single mode, all Fock states below the edge, j = 1 and 2.
  auto sys = make_fock_basis(1, 7);
  auto oracle = make_oracle(sys, 2, 4);
  for (int occ = 0; occ <= 4; ++occ) {
    auto psi = StateVector::product_state(sys, {occ});
    VectorXcd big = oracle.embed_state(psi);
    auto m = s_moments(psi);
    VectorXcd s1v = oracle.Sd[0].apply(oracle.S[0].apply(big));
    VectorXcd s2v =
        oracle.Sd[0].apply(oracle.Sd[0].apply(oracle.S[0].apply(oracle.S[0].apply(big))));
    CHECK(std::abs(big.dot(s1v).real() - m.s1[0]) < 1e-10);
    CHECK(std::abs(big.dot(s2v).real() - m.s2[0]) < 1e-10);
  }
  // Random entangled two-mode states: all four moment families.
  auto sys2 = make_fock_basis(2, 5);
  auto oracle2 = make_oracle(sys2, 2, 4);
  auto rng = make_rng(17);
  for (int rep = 0; rep < 12; ++rep) {
    auto psi = random_state(sys2, rng);
    auto m = s_moments(psi);
    VectorXcd big = oracle2.embed_state(psi);
    auto& S = oracle2.S;
    auto& Sd = oracle2.Sd;
    double pair01 = big.dot(Sd[0].apply(S[0].apply(Sd[1].apply(S[1].apply(big))))).real();
    double hop01 = big.dot(Sd[0].apply(S[1].apply(big)) + S[0].apply(Sd[1].apply(big))).real();
    CHECK(std::abs(pair01 - m.pair(0, 1)) < 1e-10);
    CHECK(std::abs(hop01 - m.hop[0]) < 1e-10);
    for (int n = 0; n < 2; ++n) {
      double s1 = big.dot(Sd[n].apply(S[n].apply(big))).real();
      double s2 =
          big.dot(Sd[n].apply(Sd[n].apply(S[n].apply(S[n].apply(big))))).real();
      CHECK(std::abs(s1 - m.s1[n]) < 1e-10);
      CHECK(std::abs(s2 - m.s2[n]) < 1e-10);
    }
  }
}

TEST_CASE("cost coefficients reproduce <H_HOBM>") {
  ModelParams p;
  p.sites = 4;
  p.n0 = 2;
  p.trunc = 2;
  p.rsq = 0.3;
  p.beta = 1.0;
  p.eps0 = 0.45;
  SparseOp H = build_hobm_hamiltonian(p);
  auto c = cost_coefficients(p);

  SUBCASE("initial state round trip") {
    auto psi = StateVector::product_state(H.basis(), {2, 2, 2, 2});
    double viaS = cost_from_moments(c, s_moments(psi));
    CHECK(std::abs(viaS - expval(H, psi).real()) < 1e-10);
  }
  SUBCASE("100 random states") {
    auto rng = make_rng(29);
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
      auto psi = random_state(H.basis(), rng);
      double viaS = cost_from_moments(c, s_moments(psi));
      worst = std::max(worst, std::abs(viaS - expval(H, psi).real()));
    }
    CHECK(worst < 1e-9);
  }
  SUBCASE("estimator F1 equals the Hamiltonian matrix") {
    EnergyEstimator est(p, 5);
    CHECK((est.f1().matrix() - H.matrix()).norm() < 1e-9);
    CHECK(est.f1().is_hermitian());
    CHECK(est.f2().is_hermitian());
  }
  SUBCASE("penalty term is folded in consistently") {
    ModelParams q = p;
    q.ell = 3.0 * q.sites;
    SparseOp Hq = build_hobm_hamiltonian(q);
    EnergyEstimator est(q, 5);
    CHECK((est.f1().matrix() - Hq.matrix()).norm() < 1e-9);
  }
}

TEST_CASE("estimator variance") {
  SUBCASE("vacuum with c1 = 1: Var(|S|^2 - 1) = 1") {
    CostCoefficients c;
    c.sites = 1;
    c.n0 = 1;
    c.c1 = Eigen::VectorXd::Ones(1);
    c.c2 = Eigen::VectorXd::Zero(1);
    c.cpair = Eigen::MatrixXd::Zero(1, 1);
    c.chop = Eigen::VectorXd::Zero(0);
    c.constant = -1.0;
    EnergyEstimator est(c, make_fock_basis(1, 4));
    auto vac = StateVector::product_state(est.basis(), {0});
    CHECK(est.mean(vac) == doctest::Approx(0.0));
    CHECK(est.variance(vac) == doctest::Approx(1.0));
  }
  SUBCASE("quadratic scaling of the variance") {
    ModelParams p;
    p.sites = 2;
    p.n0 = 1;
    p.rsq = 0.5;
    p.beta = 1.0;
    p.eps0 = 0.3;
    auto c = cost_coefficients(p);
    auto c2 = c;
    c2.c1 *= 2.0;
    c2.c2 *= 2.0;
    c2.cpair *= 2.0;
    c2.chop *= 2.0;
    c2.constant *= 2.0;
    auto basis = make_fock_basis(2, 4);
    EnergyEstimator e1(c, basis), e2(c2, basis);
    auto rng = make_rng(31);
    auto psi = random_state(basis, rng);
    CHECK(e2.variance(psi) == doctest::Approx(4.0 * e1.variance(psi)).epsilon(1e-10));
  }
  SUBCASE("fast contraction equals the joint-operator route") {
    ModelParams p;
    p.sites = 2;
    p.n0 = 2;
    p.rsq = 0.4;
    p.beta = 1.1;
    p.eps0 = 0.6;
    EnergyEstimator est(p, 5);
    auto rng = make_rng(37);
    for (int rep = 0; rep < 5; ++rep) {
      auto psi = random_state(est.basis(), rng);
      double fast = est.variance(psi);
      double joint = estimator_variance(psi, p, 3);
      CHECK(std::abs(fast - joint) < 1e-8 * std::max(1.0, std::abs(joint)));
    }
  }
  SUBCASE("indirect variance dominates the direct one") {
    ModelParams p;
    p.sites = 3;
    p.n0 = 2;
    p.rsq = 0.3;
    p.beta = 1.0;
    p.eps0 = 0.5;
    EnergyEstimator est(p, 5);
    SparseOp H = build_hobm_hamiltonian(p);
    auto rng = make_rng(41);
    for (int rep = 0; rep < 25; ++rep) {
      auto psi = random_state(est.basis(), rng);
      double direct = (H.matrix() * psi.amps).squaredNorm() -
                      std::pow(expval(H, psi).real(), 2);
      CHECK(est.variance(psi) >= direct - 1e-9);
    }
  }
}

TEST_CASE("monte carlo heterodyne oracle on a separable state") {
  ModelParams p;
  p.sites = 2;
  p.n0 = 1;
  p.rsq = 0.5;
  p.beta = 1.0;
  p.eps0 = 0.25;
  const int d = 6;
  auto basis = make_fock_basis(2, d);

  // per-mode truncated coherent states, alpha = 0.6 and 0.4
  auto coherent = [&](double alpha) {
    VectorXcd v(d);
    double fact = 1.0;
    for (int m = 0; m < d; ++m) {
      if (m > 0) fact *= m;
      v[m] = std::pow(alpha, m) / std::sqrt(fact);
    }
    v.normalize();
    return v;
  };
  VectorXcd m0 = coherent(0.6), m1 = coherent(0.4);
  VectorXcd prod(basis->total_dim());
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) prod[a * d + b] = m0[a] * m1[b];
  StateVector psi{basis, prod};

  auto c = cost_coefficients(p);
  EnergyEstimator est(c, basis);
  double mean_op = est.mean(psi);
  double var_op = est.variance(psi);

  HeterodyneSimulator sim({m0, m1});
  auto rng = make_rng(43);
  const int shots = 1000000;
  double sum = 0.0, sum2 = 0.0, sum4 = 0.0;
  for (int s = 0; s < shots; ++s) {
    double v = estimator_shot_value(c, sim.sample_shot(rng));
    sum += v;
    sum2 += v * v;
  }
  double mean_mc = sum / shots;
  double var_mc = sum2 / shots - mean_mc * mean_mc;
  // third pass for the standard error of the sample variance
  auto rng2 = make_rng(43);
  for (int s = 0; s < shots; ++s) {
    double v = estimator_shot_value(c, sim.sample_shot(rng2)) - mean_mc;
    sum4 += std::pow(v * v - var_mc, 2);
  }
  double se_var = std::sqrt(sum4 / shots / shots);
  double se_mean = std::sqrt(var_mc / shots);
  CHECK(std::abs(mean_mc - mean_op) < 3.5 * se_mean);
  CHECK(std::abs(var_mc - var_op) < 3.5 * se_var);
}

TEST_CASE("noisy cost") {
  ModelParams p;
  p.sites = 2;
  p.n0 = 1;
  p.rsq = 0.5;
  p.beta = 1.0;
  EnergyEstimator est(p, 3);
  SparseOp H = build_hobm_hamiltonian(p, 3);
  auto gs = low_spectrum(H, 1, 0.0, p.n0);
  StateVector psi{H.basis(), gs.eigenvectors.col(0)};

  SUBCASE("infinite M returns the exact energy") {
    auto rng = make_rng(1);
    ShotModel inf;
    CHECK(noisy_cost(psi, est, inf, rng) == doctest::Approx(gs.eigenvalues[0]).epsilon(1e-12));
  }
  SUBCASE("empirical variance matches sigma^2/M") {
    ShotModel shot;
    shot.shots = 1000;
    auto rng = make_rng(57);
    const int draws = 20000;
    double mean = est.mean(psi), sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < draws; ++i) {
      double v = noisy_cost(psi, est, shot, rng);
      sum += v - mean;
      sum2 += (v - mean) * (v - mean);
    }
    double var_emp = sum2 / draws - std::pow(sum / draws, 2);
    double var_th = est.variance(psi) / shot.shots;
    CHECK(std::abs(var_emp - var_th) < 0.05 * var_th);
  }
  SUBCASE("identical seeds give identical streams") {
    ShotModel shot;
    shot.shots = 100;
    auto r1 = make_rng(7), r2 = make_rng(7);
    for (int i = 0; i < 32; ++i)
      CHECK(noisy_cost(psi, est, shot, r1) == noisy_cost(psi, est, shot, r2));
  }
}

TEST_CASE("shot budget") {
  auto b = shot_budget(10, 15, 1e3, 1e5);
  CHECK(b.total_shots == doctest::Approx(1.5e9));
  CHECK(b.feasible);
  auto one = shot_budget(10, 1, 1, 1);
  CHECK(one.seconds == doctest::Approx(1e-6));
  auto big = shot_budget(10, 1, 1e3, 1e9);
  CHECK(big.total_shots == doctest::Approx(1e12));
  CHECK_FALSE(big.feasible);
}
