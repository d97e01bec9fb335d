// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Heavy sweeps respect HIGGSLAB_THREADS.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "higgslab/circuit.hpp"
#include "higgslab/exact.hpp"
#include "higgslab/measurement.hpp"
#include "higgslab/mps.hpp"
#include "higgslab/phases.hpp"
#include "higgslab/rng.hpp"
#include "higgslab/vqe.hpp"

using namespace higgslab;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail,
            double seconds) {
  std::printf("[%s] criterion %d: %s (%s; %.1f s)\n", pass ? "PASS" : "FAIL", id,
              name.c_str(), detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++failures;
}

void run_criterion(int id, const std::string& name,
                   const std::function<bool(std::string&)>& body) {
  auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool pass = false;
  try {
    pass = body(detail);
  } catch (const std::exception& ex) {
    detail = std::string("exception: ") + ex.what();
    pass = false;
  }
  double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(id, name, pass, detail, dt);
}

StateVector random_state(BasisPtr basis, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  VectorXcd v(basis->total_dim());
  for (long i = 0; i < v.size(); ++i) v[i] = Complex(g(rng), g(rng));
  v.normalize();
  return StateVector{std::move(basis), std::move(v)};
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// ---------------------------------------------------------------------

bool criterion1(std::string& detail) {
  auto t0 = std::chrono::steady_clock::now();
  ModelParams p;
  p.sites = 3;
  p.trunc = 1;  // charge window +-1
  p.rsq = 0.3;
  p.beta = 1.0;
  p.eps0 = 0.4;
  SparseOp Hfull = build_full_gauge_hamiltonian(p, 3);  // link cutoff +-3
  auto idx = gauss_kernel_indices(p, 3);
  SparseCd block = restrict_matrix(Hfull.matrix(), idx);
  SparseOp Heff = build_effective_hamiltonian(p);
  auto sf = lowest_eigs(block, 6, false);
  auto se = lowest_eigs(Heff.matrix(), 6, false);
  double dev = (sf.eigenvalues - se.eigenvalues).cwiseAbs().maxCoeff();
  double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  detail = "max |dE| = " + fmt(dev) + ", runtime " + fmt(dt) + " s";
  return dev < 1e-10 && dt < 10.0;
}

bool criterion2(std::string& detail) {
  auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int N : {1, 2, 3}) {
    const int d = 7;
    auto basis = make_fock_basis(N, d);
    SparseOp oracle = squid_expansion_oracle(N, basis);
    SparseOp hnn = number_number_hamiltonian(1.0, std::vector<double>(N, 0.0), basis);
    const double constant = 3.0 * N * (N - 1) + 3.0 * N;
    Eigen::VectorXcd od = oracle.matrix().diagonal();
    Eigen::VectorXcd hd = hnn.matrix().diagonal();
    for (long i = 0; i < basis->total_dim(); ++i) {
      bool interior = true;
      for (int m = 0; m < N; ++m) interior = interior && basis->level_of(i, m) <= d - 3;
      if (!interior) continue;
      worst = std::max(worst, std::abs(od[i] - hd[i] - constant));
    }
  }
  double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  detail = "max interior deviation = " + fmt(worst) + ", runtime " + fmt(dt) + " s";
  return worst < 1e-10 && dt < 30.0;
}

bool criterion3(std::string& detail) {
  // (i) corrected identity vs the explicit system x vacuum-noise oracle
  double worst_moment = 0.0;
  {
    auto sys2 = make_fock_basis(2, 7);
    std::vector<int> dims{9, 9, 4, 4};
    auto joint = make_basis(4, dims, ModeKind::fock);
    std::vector<SparseOp> S, Sd;
    for (int n = 0; n < 2; ++n) {
      S.push_back(embed(joint, n, local_destroy(9)) +
                  embed(joint, 2 + n, local_create(4)));
      Sd.push_back(S.back().adjoint());
    }
    auto embed_state = [&](const StateVector& psi) {
      VectorXcd big = VectorXcd::Zero(joint->total_dim());
      for (long i = 0; i < psi.basis->total_dim(); ++i) {
        if (psi.amps[i] == Complex(0.0)) continue;
        big[joint->encode({psi.basis->level_of(i, 0), psi.basis->level_of(i, 1), 0, 0})] =
            psi.amps[i];
      }
      return big;
    };
    auto check_state = [&](const StateVector& psi) {
      auto m = s_moments(psi);
      VectorXcd big = embed_state(psi);
      for (int n = 0; n < 2; ++n) {
        double s1 = big.dot(Sd[n].apply(S[n].apply(big))).real();
        double s2 = big.dot(Sd[n].apply(Sd[n].apply(S[n].apply(S[n].apply(big))))).real();
        worst_moment = std::max(worst_moment, std::abs(s1 - m.s1[n]));
        worst_moment = std::max(worst_moment, std::abs(s2 - m.s2[n]));
      }
      double pair01 =
          big.dot(Sd[0].apply(S[0].apply(Sd[1].apply(S[1].apply(big))))).real();
      double hop01 =
          big.dot(Sd[0].apply(S[1].apply(big)) + S[0].apply(Sd[1].apply(big))).real();
      worst_moment = std::max(worst_moment, std::abs(pair01 - m.pair(0, 1)));
      worst_moment = std::max(worst_moment, std::abs(hop01 - m.hop[0]));
    };
    // all two-mode Fock states up to occupation 4
    for (int a = 0; a <= 4; ++a)
      for (int b = 0; b <= 4; ++b) check_state(StateVector::product_state(sys2, {a, b}));
    // 50 random entangled states
    auto rng = make_rng(101);
    for (int rep = 0; rep < 50; ++rep) check_state(random_state(sys2, rng));
  }
  // (ii) cost round trip on 100 random states
  double worst_cost = 0.0;
  {
    ModelParams p;
    p.sites = 4;
    p.n0 = 2;
    p.trunc = 2;
    p.rsq = 0.3;
    p.beta = 1.0;
    p.eps0 = 0.45;
    SparseOp H = build_hobm_hamiltonian(p);
    auto c = cost_coefficients(p);
    auto rng = make_rng(103);
    for (int rep = 0; rep < 100; ++rep) {
      auto psi = random_state(H.basis(), rng);
      worst_cost = std::max(worst_cost, std::abs(cost_from_moments(c, s_moments(psi)) -
                                                 expval(H, psi).real()));
    }
  }
  detail = "moment deviation = " + fmt(worst_moment) +
           ", round-trip deviation = " + fmt(worst_cost);
  return worst_moment < 1e-10 && worst_cost < 1e-9;
}

bool criterion4(std::string& detail) {
  ModelParams p;
  p.sites = 4;
  p.n0 = 2;
  p.trunc = 5;  // five-dimensional photon subspace
  p.rsq = 0.3;
  p.beta = 1.0;

  std::vector<double> grid;
  for (int i = 1; i <= 20; ++i) grid.push_back(0.1 * i);
  const double predicted = predict_jump(p).jump_eps0;  // 1.611

  // exact-diagonalization reference curve
  std::vector<double> ed_efd;
  for (double e : grid) {
    ModelParams q = p;
    q.eps0 = e;
    ed_efd.push_back(ed_sweep(q, Formulation::hobm, {e})[0].efd);
  }
  double worst_slope = 0.0;
  for (size_t i = 0; i + 1 < grid.size(); ++i) {
    if (grid[i + 1] > 1.6 + 1e-9) break;
    double slope = (ed_efd[i + 1] - ed_efd[i]) / (grid[i + 1] - grid[i]);
    worst_slope = std::max(worst_slope, std::abs(slope - 1.0));
  }
  double jump_size = std::abs(ed_efd[16] - ed_efd[15]);  // between 1.6 and 1.7
  bool ed_ok = worst_slope <= 0.05 && jump_size > 0.5 && predicted > 1.6 &&
               predicted < 1.7;

  // VQE sweep with post-selection
  auto ansatz = AnsatzSpec::c14(4, 3);
  double worst_pulls = 0.0;
  double mean_evals = 0.0;
  bool vqe_ok = true;
  std::ostringstream bad;
  for (size_t i = 0; i < grid.size(); ++i) {
    ModelParams q = p;
    q.eps0 = grid[i];
    VqeConfig cfg;
    cfg.max_evals = 1000;
    cfg.restarts = 15;
    cfg.layers = 3;
    cfg.seed = mix_seed(424242, i);
    cfg.shot.shots = grid[i] < predicted ? 1e3 : 1e5;
    auto res = run_vqe_point(q, ansatz, cfg);
    double sigma = std::sqrt(res.efd_std * res.efd_std + 0.02 * 0.02);
    double pulls = std::abs(res.efd_mean - ed_efd[i]) / sigma;
    worst_pulls = std::max(worst_pulls, pulls);
    mean_evals += res.evals_per_run / grid.size();
    if (pulls > 3.0) {
      vqe_ok = false;
      bad << " eps0=" << grid[i] << " pulls=" << fmt(pulls);
    }
  }
  bool evals_ok = mean_evals >= 200 && mean_evals <= 5000;
  detail = "ED slope dev = " + fmt(worst_slope) + ", jump = " + fmt(jump_size) +
           ", worst VQE pull = " + fmt(worst_pulls) + " sigma, evals/run = " +
           fmt(mean_evals) + bad.str();
  return ed_ok && vqe_ok && evals_ok;
}

bool criterion5(std::string& detail) {
  ModelParams p;
  p.sites = 4;
  p.n0 = 2;
  p.trunc = 5;
  p.rsq = 1.0;
  p.beta = 1.0;

  std::vector<double> grid;
  for (int i = 1; i <= 19; ++i) grid.push_back(0.1 * i);

  BlockSpec blocks;  // 5 blocks, N_l = 2 then 3

  auto run_curve = [&](double M) {
    std::vector<double> efd_curve(grid.size());
    std::vector<double> energies(grid.size()), e0(grid.size()), e1(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) {
      ModelParams q = p;
      q.eps0 = grid[i];
      VqeConfig cfg;
      cfg.max_evals = 600;
      cfg.restarts = 2;
      cfg.seed = mix_seed(979797, 1000 * static_cast<int>(M == 1e6) +
                                       2000 * static_cast<int>(M == 1e9) + i);
      cfg.shot.shots = M;
      auto res = run_blockwise_vqe(q, blocks, cfg);
      efd_curve[i] = res.efd;
      energies[i] = res.energy;
      e0[i] = res.e0;
      e1[i] = res.e1;
    }
    return std::make_tuple(efd_curve, energies, e0, e1);
  };

  auto [f_inf, en_inf, e0s, e1s] = run_curve(std::numeric_limits<double>::infinity());
  bool smooth = true;
  double max_step = 0.0;
  for (size_t i = 0; i + 1 < f_inf.size(); ++i) {
    max_step = std::max(max_step, std::abs(f_inf[i + 1] - f_inf[i]));
    if (std::abs(f_inf[i + 1] - f_inf[i]) > 0.3) smooth = false;
  }
  bool in_gap = true;
  double worst_excess = 0.0;
  for (size_t i = 0; i < grid.size(); ++i) {
    double lim = e0s[i] + 0.5 * (e1s[i] - e0s[i]);
    worst_excess = std::max(worst_excess, en_inf[i] - lim);
    if (en_inf[i] > lim) in_gap = false;
  }

  auto [f_m6, en6, a6, b6] = run_curve(1e6);
  auto [f_m9, en9, a9, b9] = run_curve(1e9);
  double dev6 = 0.0, dev9 = 0.0;
  for (size_t i = 0; i < grid.size(); ++i) {
    dev6 = std::max(dev6, std::abs(f_m6[i] - f_inf[i]));
    dev9 = std::max(dev9, std::abs(f_m9[i] - f_inf[i]));
  }
  detail = "max EFD step = " + fmt(max_step) + ", worst gap excess = " +
           fmt(worst_excess) + ", max dev M=1e6: " + fmt(dev6) + ", M=1e9: " + fmt(dev9);
  return smooth && in_gap && dev9 <= dev6;
}

struct SweepCurves {
  std::vector<MpsSweepRow> rows;
  std::vector<std::pair<double, double>> curve(int n) const {
    std::vector<std::pair<double, double>> c;
    for (const auto& r : rows)
      if (r.sites == n) c.push_back({r.eps0, r.efd});
    return c;
  }
};

SweepCurves run_sweep(std::vector<int> n_list, int s, std::vector<int> chi, double rsq,
                      double lo, double hi, double step, std::uint64_t seed) {
  MpsSweepConfig cfg;
  cfg.n_list = std::move(n_list);
  cfg.s = s;
  cfg.chi_list = std::move(chi);
  cfg.rsq = rsq;
  cfg.beta = 1.0;
  for (double e = lo; e <= hi + 1e-9; e += step) cfg.eps0_grid.push_back(e);
  cfg.seed = seed;
  SweepCurves out;
  out.rows = mps_sweep(cfg);
  return out;
}

bool criterion6(std::string& detail) {
  std::ostringstream info;
  bool ok = true;

  // (a) R^2 = 0.3: jumps for every N at the predicted location
  struct Window {
    int n;
    double lo, hi;
  };
  const std::vector<Window> windows{{4, 1.45, 1.80}, {8, 0.80, 1.15}, {20, 0.50, 0.85}};
  // per (s, N): jump location for the (e) comparison below
  for (int s : {1, 2}) {
    for (const auto& w : windows) {
      auto curves = run_sweep({w.n}, s, w.n <= 8 ? std::vector<int>{32, 64}
                                                 : std::vector<int>{16, 32},
                              0.3, w.lo, w.hi, 0.05, 600 + w.n + 10 * s);
      auto c = curves.curve(w.n);
      auto j = jump_location(c);
      ModelParams p;
      p.sites = w.n;
      p.rsq = 0.3;
      p.beta = 1.0;
      double predicted = predict_jump(p).jump_eps0;
      if (!j) {
        ok = false;
        info << " (a) N=" << w.n << " s=" << s << ": no jump;";
      } else if (std::abs(j->eps0 - predicted) > 0.05 + 1e-9) {
        ok = false;
        info << " (a) N=" << w.n << " s=" << s << ": jump at " << fmt(j->eps0)
             << " vs " << fmt(predicted) << ";";
      }
    }
  }
  info << " (a) done;";

  // (e) s = 1 vs s = 2 EFD agreement at R^2 = 0.3
  {
    double worst = 0.0;
    for (const auto& w : windows) {
      auto chi = w.n <= 8 ? std::vector<int>{32, 64} : std::vector<int>{16, 32};
      auto c1 = run_sweep({w.n}, 1, chi, 0.3, w.lo, w.hi, 0.05, 700 + w.n).curve(w.n);
      auto c2 = run_sweep({w.n}, 2, chi, 0.3, w.lo, w.hi, 0.05, 800 + w.n).curve(w.n);
      for (size_t i = 0; i < c1.size(); ++i)
        worst = std::max(worst, std::abs(c1[i].second - c2[i].second));
    }
    info << " (e) max |F_s1 - F_s2| = " << fmt(worst) << ";";
    if (worst >= 1e-2) ok = false;
  }

  // (b) R^2 = 1.0: no jump anywhere
  for (int s : {1, 2}) {
    auto curves = run_sweep({4, 8, 20}, s, {16, 32}, 1.0, 0.1, 1.9, 0.2, 900 + s);
    for (int n : {4, 8, 20}) {
      auto j = jump_location(curves.curve(n));
      if (j) {
        ok = false;
        info << " (b) N=" << n << " s=" << s << ": spurious jump at " << fmt(j->eps0)
             << ";";
      }
    }
  }
  info << " (b) done;";

  // (c) R^2 = 0.6: jump for N = 20, none for N = 4, 8
  for (int s : {1, 2}) {
    auto big = run_sweep({20}, s, {16, 32}, 0.6, 0.30, 0.90, 0.05, 1000 + s);
    auto j20 = jump_location(big.curve(20));
    if (!j20) {
      ok = false;
      info << " (c) N=20 s=" << s << ": no jump;";
    }
    auto small = run_sweep({4, 8}, s, {32, 64}, 0.6, 0.1, 1.9, 0.1, 1100 + s);
    for (int n : {4, 8}) {
      auto j = jump_location(small.curve(n));
      if (j) {
        ok = false;
        info << " (c) N=" << n << " s=" << s << ": spurious jump at " << fmt(j->eps0)
             << ";";
      }
    }
  }
  info << " (c) done;";

  // (d) N = 8 DMRG energy matches the exact sector block to 1e-8
  {
    double worst = 0.0;
    for (auto [rsq, eps0] : {std::pair{0.3, 0.4}, std::pair{0.6, 0.9}}) {
      ModelParams p;
      p.sites = 8;
      p.rsq = rsq;
      p.beta = 1.0;
      p.eps0 = eps0;
      p.ell = 24.0;
      p.trunc = 1;
      DmrgOptions opt;
      opt.chi = 64;
      auto res = dmrg(build_mpo(p, 1), opt,
                      MpsState::product_state(8, 3, std::vector<int>(8, 1)));
      ModelParams p0 = p;
      p0.ell = 0.0;
      auto block = low_spectrum(build_spin_hamiltonian(p0, 1), 1, 0.0);
      worst = std::max(worst, std::abs(res.energy - block.eigenvalues[0]));
    }
    info << " (d) max |E_dmrg - E_ed| = " << fmt(worst);
    if (worst >= 1e-8) ok = false;
  }

  detail = info.str();
  return ok;
}

bool criterion7(std::string& detail) {
  double worst = 0.0;
  auto rng = make_rng(777);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (int rep = 0; rep < 10; ++rep) {
    ModelParams p;
    p.sites = 4;
    p.trunc = 2;
    p.eps0 = u(rng);
    p.rsq = u(rng);
    p.beta = u(rng);
    worst = std::max(worst, charge_conjugation_check(p));
  }
  ModelParams p;
  p.sites = 2;
  p.trunc = 1;
  p.rsq = 1e-3;
  p.beta = 1.0;
  p.eps0 = 0.5;
  SparseOp H = build_full_gauge_hamiltonian(p, 2);
  auto s = lowest_eigs(H.matrix(), 2, false);
  double gap = s.eigenvalues[1] - s.eigenvalues[0];
  detail = "max spectral deviation = " + fmt(worst) + ", degeneracy gap = " + fmt(gap);
  return worst < 1e-10 && gap < 1e-6;
}

bool criterion8(std::string& detail) {
  ModelParams p;
  p.sites = 4;
  p.n0 = 2;
  p.trunc = 5;
  p.rsq = 0.3;
  p.beta = 1.0;
  p.eps0 = 0.8;
  EnergyEstimator est(p, 5);
  SparseOp H = build_hobm_hamiltonian(p, 5);

  auto gs = low_spectrum(H, 1, 0.0, p.n0);
  StateVector psi{H.basis(), gs.eigenvectors.col(0)};
  ShotModel shot;
  shot.shots = 1000;
  auto rng = make_rng(808);
  const int draws = 10000;
  double mean = est.mean(psi), sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < draws; ++i) {
    double v = noisy_cost(psi, est, shot, rng);
    sum += v - mean;
    sum2 += (v - mean) * (v - mean);
  }
  double var_emp = sum2 / draws - std::pow(sum / draws, 2);
  double var_th = est.variance(psi) / shot.shots;
  double rel = std::abs(var_emp - var_th) / var_th;

  double floor_margin = std::numeric_limits<double>::infinity();
  auto rng2 = make_rng(809);
  for (int rep = 0; rep < 50; ++rep) {
    auto r = random_state(est.basis(), rng2);
    double direct = (H.matrix() * r.amps).squaredNorm() -
                    std::pow(expval(H, r).real(), 2);
    floor_margin = std::min(floor_margin, est.variance(r) - direct);
  }
  detail = "variance relative error = " + fmt(rel) + ", min(sigma^2 - Var H) = " +
           fmt(floor_margin);
  return rel < 0.05 && floor_margin > -1e-9;
}

bool criterion9(std::string& detail) {
  // Fig. 3 configuration: 20 grid points, 15 restarts, ~1e3 evals each,
  // M = 1e3 before and 1e5 after the predicted transition at 1.611.
  ModelParams p;
  p.sites = 4;
  p.rsq = 0.3;
  p.beta = 1.0;
  double sw = predict_jump(p).jump_eps0;
  double total = 0.0;
  bool feasible = true;
  for (int i = 1; i <= 20; ++i) {
    double eps0 = 0.1 * i;
    auto b = shot_budget(2.0 * 3, 15, 1000, eps0 < sw ? 1e3 : 1e5);
    total += b.total_shots;
    feasible = feasible && b.feasible;
  }
  auto agg = shot_budget(2.0 * 3, 1, 1, total);
  detail = "total shots = " + fmt(agg.total_shots) + ", feasible = " +
           (agg.feasible ? std::string("yes") : std::string("no"));
  return agg.total_shots >= 1e9 && agg.total_shots < 1e11 && agg.feasible && feasible;
}

}  // namespace

int main() {
  std::printf("higgslab acceptance suite\n");
  run_criterion(1, "gauge-elimination spectral equivalence", criterion1);
  run_criterion(2, "SQUID quartic expansion oracle", criterion2);
  run_criterion(3, "heterodyne moment identities and cost round trip", criterion3);
  run_criterion(4, "first-order transition via noisy VQE (Fig. 3 scale)", criterion4);
  run_criterion(5, "block-wise VQE in the smooth regime (Fig. 4 scale)", criterion5);
  run_criterion(6, "MPS phase structure at desk scale (Fig. 5/6)", criterion6);
  run_criterion(7, "charge-conjugation symmetry suite", criterion7);
  run_criterion(8, "measurement noise-model statistics", criterion8);
  run_criterion(9, "measurement budget model", criterion9);
  if (failures == 0) {
    std::printf("all acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d criterion(s) failed\n", failures);
  return 1;
}
