#include "higgslab/vqe.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "higgslab/parallel.hpp"
#include "higgslab/rng.hpp"

namespace higgslab {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

struct Recorder {
  RunTrace trace;
  int max_evals;
  int used = 0;

  bool exhausted() const { return used >= max_evals; }
  double record(const CostFn& f, const std::vector<double>& x) {
    double c = f(x);
    ++used;
    EvalRecord r;
    r.eval = used;
    r.params = x;
    r.cost = c;
    double prev = trace.evals.empty() ? std::numeric_limits<double>::infinity()
                                      : trace.evals.back().best;
    r.best = std::isnan(c) ? prev : std::min(prev, c);
    trace.evals.push_back(std::move(r));
    return c;
  }
};

RunTrace mads(const CostFn& f, std::vector<double> x0, const VqeConfig& cfg,
              std::mt19937_64& rng) {
  const int dim = static_cast<int>(x0.size());
  Recorder rec{{}, cfg.max_evals};
  std::vector<double> x = std::move(x0);
  double fx = rec.record(f, x);
  int n_inc = std::isnan(fx) ? 0 : 1;
  double mean_inc = n_inc ? fx : std::numeric_limits<double>::infinity();

  // Running estimate of the sampling noise, from repeated incumbent
  // evaluations (zero for deterministic cost functions).
  double noise_sq_sum = 0.0;
  int noise_n = 0;
  auto noise_sigma = [&] { return noise_n > 0 ? std::sqrt(noise_sq_sum / noise_n) : 0.0; };

  double mesh = cfg.mesh_init;
  const double mesh_max = cfg.mesh_init;
  std::vector<int> dirs(2 * dim);
  std::iota(dirs.begin(), dirs.end(), 0);

  // Accept a candidate sample ft against the incumbent mean; under noise
  // a promising first sample is confirmed with a second one.
  auto accepts = [&](double ft, const std::vector<double>& xt, double* value) {
    if (std::isnan(ft)) return false;
    *value = ft;
    if (ft >= mean_inc) return false;
    if (noise_sigma() == 0.0) return true;
    if (rec.exhausted()) return false;
    double ft2 = rec.record(f, xt);
    if (std::isnan(ft2)) return false;
    *value = 0.5 * (ft + ft2);
    return *value < mean_inc;
  };

  // Recent incumbents, re-vetted by averaging at the end of a noisy run.
  std::vector<std::vector<double>> recent{x};
  auto remember = [&](const std::vector<double>& p) {
    recent.push_back(p);
    if (recent.size() > 8) recent.erase(recent.begin());
  };
  const int endgame_budget =
      std::max(16, cfg.max_evals / 8);  // reserved when noise is present

  int last_success = -1;
  bool refresh_incumbent = false;
  while (!rec.exhausted() && mesh > cfg.mesh_tol) {
    if (noise_sigma() > 0.0 && rec.used + endgame_budget >= cfg.max_evals) break;
    // After a failed round, refresh the incumbent estimate so a single
    // lucky sample cannot block progress under measurement noise.
    if (refresh_incumbent && !rec.exhausted()) {
      double c = rec.record(f, x);
      if (!std::isnan(c)) {
        double delta = c - mean_inc;
        mean_inc = (mean_inc * n_inc + c) / (n_inc + 1);
        ++n_inc;
        noise_sq_sum += delta * delta * n_inc / (n_inc + 1.0);
        ++noise_n;
      }
      refresh_incumbent = false;
    }
    std::shuffle(dirs.begin(), dirs.end(), rng);
    if (last_success >= 0) {  // poll the last successful direction first
      auto it = std::find(dirs.begin(), dirs.end(), last_success);
      if (it != dirs.end()) std::iter_swap(dirs.begin(), it);
    }
    bool improved = false;
    for (int d : dirs) {
      if (rec.exhausted()) break;
      std::vector<double> xt = x;
      xt[d / 2] += (d % 2 == 0 ? mesh : -mesh);
      double ft = rec.record(f, xt);
      double accepted_value;
      if (accepts(ft, xt, &accepted_value)) {  // opportunistic poll
        x = std::move(xt);
        mean_inc = accepted_value;
        n_inc = 1;
        improved = true;
        last_success = d;
        remember(x);
        break;
      }
    }
    if (improved) {
      // speculative search step: keep marching while the move pays off
      int streak = 1;
      while (!rec.exhausted()) {
        std::vector<double> xp = x;
        xp[last_success / 2] += (last_success % 2 == 0 ? mesh : -mesh);
        double fp = rec.record(f, xp);
        double accepted_value;
        if (accepts(fp, xp, &accepted_value)) {
          x = std::move(xp);
          mean_inc = accepted_value;
          n_inc = 1;
          ++streak;
          remember(x);
        } else {
          break;
        }
      }
      // expand only when the direction kept paying; a single-step success
      // keeps the mesh, which avoids burning a full failed poll round
      if (streak >= 2) mesh = std::min(mesh * 2.0, mesh_max);
    } else {
      // Noise makes poll rounds fail spuriously; once noise is detected
      // the mesh keeps a floor so the budget is spent polling instead of
      // terminating on a collapsed mesh.
      double floor_mesh = noise_sigma() > 0.0 ? cfg.mesh_init / 2.0 : 0.0;
      mesh = std::max(mesh * 0.5, floor_mesh);
      refresh_incumbent = true;
      if (mesh <= cfg.mesh_tol) break;
    }
  }
  // Averaging endgame: under noise, re-vet the recent incumbents with the
  // reserved budget and return the best averaged point.
  if (noise_sigma() > 0.0 && recent.size() >= 2 && !rec.exhausted()) {
    int per = std::max(2, (cfg.max_evals - rec.used) / static_cast<int>(recent.size()));
    double best_mean = std::numeric_limits<double>::infinity();
    std::vector<double> best_point = x;
    for (auto it = recent.rbegin(); it != recent.rend() && !rec.exhausted(); ++it) {
      double sum = 0.0;
      int n = 0;
      for (int s = 0; s < per && !rec.exhausted(); ++s) {
        double c = rec.record(f, *it);
        if (!std::isnan(c)) { sum += c; ++n; }
      }
      if (n > 0 && sum / n < best_mean) {
        best_mean = sum / n;
        best_point = *it;
      }
    }
    x = best_point;
    mean_inc = best_mean;
  }
  rec.trace.final_params = x;
  rec.trace.final_cost = mean_inc;
  rec.trace.best_cost = rec.trace.evals.back().best;
  return rec.trace;
}

RunTrace nelder_mead(const CostFn& f, std::vector<double> x0, const VqeConfig& cfg,
                     std::mt19937_64& rng) {
  const int dim = static_cast<int>(x0.size());
  Recorder rec{{}, cfg.max_evals};
  std::uniform_real_distribution<double> jitter(0.5, 1.5);

  std::vector<std::vector<double>> simplex{x0};
  for (int i = 0; i < dim; ++i) {
    auto v = x0;
    v[i] += cfg.mesh_init * jitter(rng);
    simplex.push_back(v);
  }
  std::vector<double> fv;
  for (const auto& v : simplex) {
    double c = rec.record(f, v);
    fv.push_back(std::isnan(c) ? std::numeric_limits<double>::infinity() : c);
    if (rec.exhausted()) break;
  }
  while (fv.size() < simplex.size()) fv.push_back(std::numeric_limits<double>::infinity());

  auto order = [&] {
    std::vector<int> idx(simplex.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    std::vector<std::vector<double>> s2;
    std::vector<double> f2;
    for (int i : idx) {
      s2.push_back(simplex[i]);
      f2.push_back(fv[i]);
    }
    simplex = std::move(s2);
    fv = std::move(f2);
  };
  auto eval = [&](const std::vector<double>& v) {
    double c = rec.record(f, v);
    return std::isnan(c) ? std::numeric_limits<double>::infinity() : c;
  };

  while (!rec.exhausted()) {
    order();
    if (std::abs(fv.front() - fv.back()) < 1e-12) break;
    std::vector<double> centroid(dim, 0.0);
    for (int i = 0; i < dim; ++i) {
      for (int v = 0; v < dim; ++v) centroid[v] += simplex[i][v];
    }
    for (auto& c : centroid) c /= dim;
    auto blend = [&](double t) {
      std::vector<double> v(dim);
      for (int i = 0; i < dim; ++i) v[i] = centroid[i] + t * (simplex.back()[i] - centroid[i]);
      return v;
    };
    auto xr = blend(-1.0);
    double fr = eval(xr);
    if (fr < fv.front()) {
      if (rec.exhausted()) break;
      auto xe = blend(-2.0);
      double fe = eval(xe);
      if (fe < fr) {
        simplex.back() = xe;
        fv.back() = fe;
      } else {
        simplex.back() = xr;
        fv.back() = fr;
      }
    } else if (fr < fv[fv.size() - 2]) {
      simplex.back() = xr;
      fv.back() = fr;
    } else {
      if (rec.exhausted()) break;
      auto xc = blend(0.5);
      double fc = eval(xc);
      if (fc < fv.back()) {
        simplex.back() = xc;
        fv.back() = fc;
      } else {  // shrink toward the best vertex
        for (size_t i = 1; i < simplex.size() && !rec.exhausted(); ++i) {
          for (int v = 0; v < dim; ++v)
            simplex[i][v] = simplex[0][v] + 0.5 * (simplex[i][v] - simplex[0][v]);
          fv[i] = eval(simplex[i]);
        }
      }
    }
  }
  order();
  rec.trace.final_params = simplex.front();
  rec.trace.final_cost = fv.front();
  rec.trace.best_cost = rec.trace.evals.back().best;
  return rec.trace;
}

RunTrace spsa(const CostFn& f, std::vector<double> x0, const VqeConfig& cfg,
              std::mt19937_64& rng) {
  const int dim = static_cast<int>(x0.size());
  Recorder rec{{}, cfg.max_evals};
  std::vector<double> x = std::move(x0);
  std::bernoulli_distribution coin(0.5);
  const double a = 0.2, c = 0.1, A = 0.1 * cfg.max_evals, alpha = 0.602, gamma = 0.101;
  int k = 0;
  while (rec.used + 2 < cfg.max_evals) {
    double ak = a / std::pow(k + 1 + A, alpha);
    double ck = c / std::pow(k + 1, gamma);
    std::vector<double> delta(dim), xp = x, xm = x;
    for (int i = 0; i < dim; ++i) {
      delta[i] = coin(rng) ? 1.0 : -1.0;
      xp[i] += ck * delta[i];
      xm[i] -= ck * delta[i];
    }
    double fp = rec.record(f, xp);
    double fm = rec.record(f, xm);
    if (!std::isnan(fp) && !std::isnan(fm)) {
      for (int i = 0; i < dim; ++i) x[i] -= ak * (fp - fm) / (2.0 * ck * delta[i]);
    }
    ++k;
  }
  double fx = rec.record(f, x);
  rec.trace.final_params = x;
  rec.trace.final_cost = std::isnan(fx) ? std::numeric_limits<double>::infinity() : fx;
  rec.trace.best_cost = rec.trace.evals.back().best;
  return rec.trace;
}

}  // namespace

RunTrace optimize(const CostFn& cost, std::vector<double> x0, const VqeConfig& cfg,
                  std::mt19937_64& rng) {
  require(cfg.max_evals >= 1, "optimize: max_evals must be >= 1");
  require(!x0.empty(), "optimize: empty parameter vector");
  switch (cfg.optimizer) {
    case OptimizerKind::mads: return mads(cost, std::move(x0), cfg, rng);
    case OptimizerKind::nelder_mead: return nelder_mead(cost, std::move(x0), cfg, rng);
    case OptimizerKind::spsa: return spsa(cost, std::move(x0), cfg, rng);
  }
  throw std::invalid_argument("optimize: unknown optimizer");
}

RunTrace optimize(const CostFn& cost, int dim, const VqeConfig& cfg,
                  std::mt19937_64& rng) {
  std::vector<double> x0(dim, 0.0);
  if (cfg.init == InitStrategy::uniform_random) {
    std::uniform_real_distribution<double> u(-cfg.theta_range, cfg.theta_range);
    for (auto& v : x0) v = u(rng);
  }
  return optimize(cost, std::move(x0), cfg, rng);
}

namespace {

std::vector<double> initial_params(int n_theta, int n_omega, const VqeConfig& cfg,
                                   std::mt19937_64& rng) {
  std::vector<double> x(n_theta + n_omega, 0.0);
  if (cfg.init == InitStrategy::uniform_random) {
    std::uniform_real_distribution<double> ut(-cfg.theta_range, cfg.theta_range);
    std::uniform_real_distribution<double> uo(-cfg.omega_range, cfg.omega_range);
    for (int i = 0; i < n_theta; ++i) x[i] = ut(rng);
    for (int i = 0; i < n_omega; ++i) x[n_theta + i] = uo(rng);
  }
  return x;
}

}  // namespace

VqePointResult run_vqe_point(const ModelParams& p, const AnsatzSpec& ansatz,
                             const VqeConfig& cfg) {
  p.validate();
  const int N = p.sites;
  const int d = p.trunc;
  require(d >= 2, "run_vqe_point: fock truncation must be >= 2");

  SparseOp H = build_hobm_hamiltonian(p, d);
  EnergyEstimator estimator(p, d);
  BasisPtr basis = H.basis();
  StateVector psi0 = StateVector::product_state(basis, std::vector<int>(N, p.n0));

  VqePointResult res;
  res.eps0 = p.eps0;

  StateVector ed_ground{basis, VectorXcd()};
  if (basis->total_dim() <= 100000) {
    Spectrum s = low_spectrum(H, 2, 0.0, p.n0);
    res.e0 = s.eigenvalues[0];
    res.e1 = s.eigenvalues[1];
    res.ed_available = true;
    ed_ground.amps = s.eigenvectors.col(0);
  }

  const int n_theta = ansatz.theta_count();
  res.runs.resize(cfg.restarts);
  parallel_for(cfg.restarts, [&](long r) {
    auto rng_init = make_rng(cfg.seed, 2 * r);
    auto rng_noise = make_rng(cfg.seed, 2 * r + 1);
    auto x0 = initial_params(n_theta, N, cfg, rng_init);
    CostFn cost = [&](const std::vector<double>& x) {
      std::vector<double> theta(x.begin(), x.begin() + n_theta);
      std::vector<double> omega(x.begin() + n_theta, x.end());
      StateVector psi = apply_ansatz(ansatz, theta, omega, psi0);
      return noisy_cost(psi, estimator, cfg.shot, rng_noise);
    };
    RunTrace trace = optimize(cost, std::move(x0), cfg, rng_init);

    std::vector<double> theta(trace.final_params.begin(),
                              trace.final_params.begin() + n_theta);
    std::vector<double> omega(trace.final_params.begin() + n_theta,
                              trace.final_params.end());
    StateVector psi = apply_ansatz(ansatz, theta, omega, psi0);
    trace.final_energy = estimator.mean(psi);
    trace.final_efd = efd(charge_profile(psi, p.n0), p);
    if (res.ed_available) {
      trace.fidelity = std::norm(ed_ground.amps.dot(psi.amps));
      trace.success = trace.final_energy < res.e0 + 0.5 * (res.e1 - res.e0);
    } else {
      trace.success = true;  // lowest-cost post-selection only
    }
    res.runs[r] = std::move(trace);
  });

  int sel = 0;
  for (size_t r = 1; r < res.runs.size(); ++r)
    if (res.runs[r].final_cost < res.runs[sel].final_cost) sel = static_cast<int>(r);
  res.selected_run = sel;
  res.efd = res.runs[sel].final_efd;
  res.energy = res.runs[sel].final_energy;
  res.fidelity = res.runs[sel].fidelity;

  double evals = 0.0, sum = 0.0, sum2 = 0.0;
  int ns = 0;
  for (const auto& run : res.runs) {
    evals += static_cast<double>(run.evals.size());
    if (run.success) {
      sum += run.final_efd;
      sum2 += run.final_efd * run.final_efd;
      ++ns;
    }
  }
  res.evals_per_run = evals / std::max<size_t>(1, res.runs.size());
  res.n_success = ns;
  if (ns > 0) {
    res.efd_mean = sum / ns;
    res.efd_std = std::sqrt(std::max(0.0, sum2 / ns - res.efd_mean * res.efd_mean));
  } else {
    res.efd_mean = res.efd;
    res.efd_std = 0.0;
  }
  return res;
}

BlockwiseResult run_blockwise_vqe(const ModelParams& p, const BlockSpec& spec,
                                  const VqeConfig& cfg) {
  p.validate();
  const int N = p.sites;
  const int d = p.trunc;
  SparseOp H = build_hobm_hamiltonian(p, d);
  EnergyEstimator estimator(p, d);
  BasisPtr basis = H.basis();

  std::vector<int> occ(N, p.n0);
  occ.front() = p.n0 - 1;
  occ.back() = p.n0 + 1;
  StateVector state = StateVector::product_state(basis, occ);

  BlockwiseResult res;
  res.eps0 = p.eps0;

  std::vector<double> omega(N, 0.0);
  long total_evals = 0;

  for (int block = 0; block < spec.n_blocks; ++block) {
    const int n_theta = spec.theta_count(block, N);
    const int n_omega = (block == 0) ? N : 0;
    std::vector<RunTrace> traces(cfg.restarts);
    parallel_for(cfg.restarts, [&](long r) {
      auto rng_init = make_rng(cfg.seed, 1000 * (block + 1) + 2 * r);
      auto rng_noise = make_rng(cfg.seed, 1000 * (block + 1) + 2 * r + 1);
      // restart 0 polls around the identity circuit; the rest explore
      std::vector<double> x0(n_theta + n_omega, 0.0);
      if (r > 0) x0 = initial_params(n_theta, n_omega, cfg, rng_init);
      CostFn cost = [&](const std::vector<double>& x) {
        std::vector<double> theta(x.begin(), x.begin() + n_theta);
        std::vector<double> om = omega;
        if (n_omega > 0) om.assign(x.begin() + n_theta, x.end());
        StateVector psi = apply_block(spec, block, theta, om, state);
        return noisy_cost(psi, estimator, cfg.shot, rng_noise);
      };
      traces[r] = optimize(cost, std::move(x0), cfg, rng_init);
    });
    int sel = 0;
    for (size_t r = 1; r < traces.size(); ++r)
      if (traces[r].final_cost < traces[sel].final_cost) sel = static_cast<int>(r);
    for (const auto& t : traces) total_evals += static_cast<long>(t.evals.size());

    const auto& best = traces[sel].final_params;
    std::vector<double> theta(best.begin(), best.begin() + n_theta);
    if (n_omega > 0) omega.assign(best.begin() + n_theta, best.end());
    state = apply_block(spec, block, theta, omega, state);
    res.block_thetas.push_back(std::move(theta));
  }

  res.omega = omega;
  res.total_evals = total_evals;
  res.energy = estimator.mean(state);
  res.efd = efd(charge_profile(state, p.n0), p);
  if (basis->total_dim() <= 100000) {
    Spectrum s = low_spectrum(H, 2, 0.0, p.n0);
    res.e0 = s.eigenvalues[0];
    res.e1 = s.eigenvalues[1];
    res.ed_available = true;
    res.fidelity = std::norm(s.eigenvectors.col(0).dot(state.amps));
  }
  return res;
}

}  // namespace higgslab
