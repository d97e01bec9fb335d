#include "higgslab/runner.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"

#include "higgslab/circuit.hpp"
#include "higgslab/parallel.hpp"
#include "higgslab/phases.hpp"
#include "higgslab/report.hpp"
#include "higgslab/rng.hpp"

namespace higgslab {

namespace {

using nlohmann::json;

json model_json(const ModelParams& m) {
  return json{{"sites", m.sites}, {"beta", m.beta},  {"rsq", m.rsq},
              {"eps0", m.eps0},   {"ell", m.ell},    {"n0", m.n0},
              {"trunc", m.trunc}};
}

std::string formulation_name(Formulation f) {
  switch (f) {
    case Formulation::effective: return "effective";
    case Formulation::hobm: return "hobm";
    case Formulation::spin: return "spin";
    case Formulation::full_gauge: return "full_gauge";
  }
  return "unknown";
}

double point_shots(const ExperimentConfig& cfg, double eps0) {
  double sw = cfg.switch_eps0;
  if (std::isnan(sw)) sw = predict_jump(cfg.model).jump_eps0;
  return eps0 < sw ? cfg.shots_pre : cfg.shots_post;
}

std::string two_digit(int v) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "%02d", v);
  return buf;
}

// ---- experiment implementations ----

RunOutcome run_ed_sweep(const ExperimentConfig& cfg) {
  RunOutcome out;
  ensure_directory(cfg.output_dir);
  CsvWriter csv({"eps0", "energy", "efd", "gap"});
  PlotSeries efd_series{"EFD (ED)", {}, {}, {}, true};
  int failures = 0;
  std::ostringstream log;
  for (double e : cfg.eps0_grid) {
    try {
      ModelParams p = cfg.model;
      p.eps0 = e;
      auto pts = ed_sweep(p, cfg.formulation, {e});
      csv.add_row({pts[0].eps0, pts[0].energy, pts[0].efd, pts[0].gap});
      efd_series.x.push_back(e);
      efd_series.y.push_back(pts[0].efd);
    } catch (const std::exception& ex) {
      ++failures;
      log << "point eps0=" << e << " failed: " << ex.what() << "\n";
      csv.add_mixed_row({CsvWriter::format_double(e), "nan", "nan", "nan"});
    }
  }
  std::string csv_path = cfg.output_dir + "/ed_sweep.csv";
  csv.write(csv_path);
  write_meta_sidecar(csv_path, resolved_config_json(cfg));
  out.artifacts.push_back(csv_path);
  std::string svg_path = cfg.output_dir + "/ed_sweep.svg";
  write_svg_plot(svg_path, "Ground-state EFD (" + formulation_name(cfg.formulation) + ")",
                 "background field", "EFD", {efd_series});
  write_meta_sidecar(svg_path, resolved_config_json(cfg));
  out.artifacts.push_back(svg_path);
  out.summary = log.str();
  out.exit_code = failures == static_cast<int>(cfg.eps0_grid.size()) ? 1 : 0;
  return out;
}

RunOutcome run_vqe_sweep(const ExperimentConfig& cfg) {
  RunOutcome out;
  ensure_directory(cfg.output_dir);
  if (cfg.export_traces) ensure_directory(cfg.output_dir + "/traces");
  CsvWriter csv({"eps0", "efd_mean", "efd_std", "energy_mean", "fidelity", "evals",
                 "efd_selected", "n_success", "shots", "e0", "e1"});
  PlotSeries vqe_series{"VQE", {}, {}, {}, false};
  PlotSeries ed_series{"ED", {}, {}, {}, true};
  int failures = 0;
  std::ostringstream log;
  auto ansatz = AnsatzSpec::c14(cfg.model.sites, cfg.vqe.layers);

  for (size_t i = 0; i < cfg.eps0_grid.size(); ++i) {
    double e = cfg.eps0_grid[i];
    try {
      ModelParams p = cfg.model;
      p.eps0 = e;
      VqeConfig vq = cfg.vqe;
      vq.seed = mix_seed(cfg.seed, i);
      vq.shot.shots = point_shots(cfg, e);
      auto res = run_vqe_point(p, ansatz, vq);

      double energy_mean = 0.0;
      int n = 0;
      for (const auto& r : res.runs)
        if (r.success) {
          energy_mean += r.final_energy;
          ++n;
        }
      energy_mean = n ? energy_mean / n : res.energy;
      double total_evals = res.evals_per_run * res.runs.size();
      csv.add_row({e, res.efd_mean, res.efd_std, energy_mean, res.fidelity, total_evals,
                   res.efd, static_cast<double>(res.n_success), vq.shot.shots, res.e0,
                   res.e1});
      vqe_series.x.push_back(e);
      vqe_series.y.push_back(res.efd_mean);
      vqe_series.yerr.push_back(res.efd_std);

      if (cfg.export_traces) {
        for (size_t r = 0; r < res.runs.size(); ++r) {
          CsvWriter trace({"eval", "cost", "best_cost"});
          for (const auto& rec : res.runs[r].evals)
            trace.add_row({static_cast<double>(rec.eval), rec.cost, rec.best});
          std::string tpath = cfg.output_dir + "/traces/point" +
                              two_digit(static_cast<int>(i)) + "_run" +
                              two_digit(static_cast<int>(r)) + ".csv";
          trace.write(tpath);
          write_meta_sidecar(tpath, resolved_config_json(cfg));
        }
      }

      ModelParams pe = p;
      auto ed = ed_sweep(pe, Formulation::hobm, {e});
      ed_series.x.push_back(e);
      ed_series.y.push_back(ed[0].efd);
    } catch (const std::exception& ex) {
      ++failures;
      log << "point eps0=" << e << " failed: " << ex.what() << "\n";
    }
  }
  std::string csv_path = cfg.output_dir + "/vqe_sweep.csv";
  csv.write(csv_path);
  write_meta_sidecar(csv_path, resolved_config_json(cfg));
  out.artifacts.push_back(csv_path);
  std::string svg_path = cfg.output_dir + "/vqe_sweep.svg";
  write_svg_plot(svg_path, "VQE electric field density", "background field", "EFD",
                 {ed_series, vqe_series});
  write_meta_sidecar(svg_path, resolved_config_json(cfg));
  out.artifacts.push_back(svg_path);
  out.summary = log.str();
  out.exit_code = failures == static_cast<int>(cfg.eps0_grid.size()) ? 1 : 0;
  return out;
}

RunOutcome run_vqe_blockwise(const ExperimentConfig& cfg) {
  RunOutcome out;
  ensure_directory(cfg.output_dir);
  std::vector<double> ms = cfg.shots_list;
  if (ms.empty()) ms.push_back(std::numeric_limits<double>::infinity());
  CsvWriter csv({"eps0", "shots", "efd", "energy", "fidelity", "evals"});
  std::vector<PlotSeries> series;
  int failures = 0, total = 0;
  std::ostringstream log;
  for (size_t mi = 0; mi < ms.size(); ++mi) {
    PlotSeries s;
    s.label = std::isinf(ms[mi]) ? "M = inf" : "M = " + CsvWriter::format_double(ms[mi]);
    for (size_t i = 0; i < cfg.eps0_grid.size(); ++i) {
      ++total;
      double e = cfg.eps0_grid[i];
      try {
        ModelParams p = cfg.model;
        p.eps0 = e;
        VqeConfig vq = cfg.vqe;
        vq.seed = mix_seed(cfg.seed, 1000 * mi + i);
        vq.shot.shots = ms[mi];
        auto res = run_blockwise_vqe(p, cfg.blocks, vq);
        csv.add_row({e, ms[mi], res.efd, res.energy, res.fidelity,
                     static_cast<double>(res.total_evals)});
        s.x.push_back(e);
        s.y.push_back(res.efd);
      } catch (const std::exception& ex) {
        ++failures;
        log << "point eps0=" << e << " M=" << ms[mi] << " failed: " << ex.what() << "\n";
      }
    }
    series.push_back(std::move(s));
  }
  std::string csv_path = cfg.output_dir + "/vqe_blockwise.csv";
  csv.write(csv_path);
  write_meta_sidecar(csv_path, resolved_config_json(cfg));
  out.artifacts.push_back(csv_path);
  std::string svg_path = cfg.output_dir + "/vqe_blockwise.svg";
  write_svg_plot(svg_path, "Block-wise VQE electric field density", "background field",
                 "EFD", series);
  write_meta_sidecar(svg_path, resolved_config_json(cfg));
  out.artifacts.push_back(svg_path);
  out.summary = log.str();
  out.exit_code = failures == total ? 1 : 0;
  return out;
}

RunOutcome run_mps_sweep(const ExperimentConfig& cfg) {
  RunOutcome out;
  ensure_directory(cfg.output_dir);
  CsvWriter csv({"N", "s", "Rsq", "beta", "eps0", "chi_max", "energy_density",
                 "energy_err", "efd", "efd_err"});
  std::vector<double> rsqs = cfg.rsq_list.empty() ? std::vector<double>{cfg.model.rsq}
                                                  : cfg.rsq_list;
  int failures = 0, total = 0;
  std::ostringstream log;
  int combo = 0;
  for (double rsq : rsqs) {
    for (int s : cfg.s_list) {
      ++total;
      try {
        MpsSweepConfig mc;
        mc.n_list = cfg.n_list;
        mc.s = s;
        mc.chi_list = cfg.chi_list;
        mc.rsq = rsq;
        mc.beta = cfg.model.beta;
        mc.eps0_grid = cfg.eps0_grid;
        mc.ell = cfg.mps_ell;
        mc.sweep_tol = cfg.sweep_tol;
        mc.seed = mix_seed(cfg.seed, combo);
        auto rows = mps_sweep(mc);
        for (const auto& r : rows)
          csv.add_row({static_cast<double>(r.sites), static_cast<double>(r.s), r.rsq,
                       r.beta, r.eps0, static_cast<double>(r.chi_max), r.energy_density,
                       r.energy_err, r.efd, r.efd_err});
        std::vector<PlotSeries> series;
        for (int n : cfg.n_list) {
          PlotSeries ps;
          ps.label = "N = " + std::to_string(n);
          for (const auto& r : rows)
            if (r.sites == n) {
              ps.x.push_back(r.eps0);
              ps.y.push_back(r.efd);
              ps.yerr.push_back(r.efd_err);
            }
          series.push_back(std::move(ps));
        }
        std::string tag = "rsq" + std::to_string(combo) + "_s" + std::to_string(s);
        std::string svg_path = cfg.output_dir + "/mps_efd_" + tag + ".svg";
        write_svg_plot(svg_path,
                       "MPS EFD, R^2 = " + CsvWriter::format_double(rsq) + ", s = " +
                           std::to_string(s),
                       "background field", "EFD", series);
        write_meta_sidecar(svg_path, resolved_config_json(cfg));
        out.artifacts.push_back(svg_path);
      } catch (const std::exception& ex) {
        ++failures;
        log << "combo rsq=" << rsq << " s=" << s << " failed: " << ex.what() << "\n";
      }
      ++combo;
    }
  }
  std::string csv_path = cfg.output_dir + "/mps_sweep.csv";
  csv.write(csv_path);
  write_meta_sidecar(csv_path, resolved_config_json(cfg));
  out.artifacts.push_back(csv_path);
  out.summary = log.str();
  out.exit_code = failures == total ? 1 : 0;
  return out;
}

RunOutcome run_phase_report(const ExperimentConfig& cfg) {
  RunOutcome out;
  ensure_directory(cfg.output_dir);
  std::ostringstream text;

  auto pred = predict_jump(cfg.model);
  text << "first-transition prediction: eps0' = " << pred.jump_eps0 << "\n";
  text << "dominant states: all-zero charges -> boundary pair (-1, 0...0, +1)\n";
  if (pred.regime_advisory)
    text << "advisory: R^2 = " << cfg.model.rsq
         << " lies above the trusted large-mass window (R^2 <= 0.5)\n";

  CsvWriter csv({"eps0", "efd", "conjugation_deviation"});
  std::vector<std::pair<double, double>> curve;
  int failures = 0;
  for (double e : cfg.eps0_grid) {
    try {
      ModelParams p = cfg.model;
      p.eps0 = e;
      auto pts = ed_sweep(p, Formulation::effective, {e});
      double dev = charge_conjugation_check(p);
      csv.add_row({e, pts[0].efd, dev});
      curve.push_back({e, pts[0].efd});
    } catch (const std::exception& ex) {
      ++failures;
      text << "point eps0=" << e << " failed: " << ex.what() << "\n";
    }
  }
  auto rep = periodicity_probe(curve);
  text << "periodicity drift over one period: max = " << rep.max_drift
       << ", mean = " << rep.mean_drift << " (" << rep.n_compared
       << " comparable pairs; finite-size drift is physical)\n";

  std::string csv_path = cfg.output_dir + "/phase_report.csv";
  csv.write(csv_path);
  write_meta_sidecar(csv_path, resolved_config_json(cfg));
  out.artifacts.push_back(csv_path);
  std::string txt_path = cfg.output_dir + "/phase_report.txt";
  {
    std::ofstream f(txt_path, std::ios::binary);
    f << text.str();
  }
  write_meta_sidecar(txt_path, resolved_config_json(cfg));
  out.artifacts.push_back(txt_path);
  out.summary = text.str();
  out.exit_code = failures == static_cast<int>(cfg.eps0_grid.size()) ? 1 : 0;
  return out;
}

}  // namespace

std::string resolved_config_json(const ExperimentConfig& cfg) {
  json j;
  j["tool"] = "higgslab";
#ifdef HIGGSLAB_VERSION
  j["version"] = HIGGSLAB_VERSION;
#else
  j["version"] = "dev";
#endif
  j["experiment"] = {{"kind", to_string(cfg.kind)},
                     {"output_dir", cfg.output_dir},
                     {"seed", cfg.seed}};
  j["model"] = model_json(cfg.model);
  j["model"]["formulation"] = formulation_name(cfg.formulation);
  j["grid"] = cfg.eps0_grid;
  if (cfg.kind == ExperimentKind::vqe_sweep || cfg.kind == ExperimentKind::vqe_blockwise) {
    j["vqe"] = {{"optimizer", cfg.vqe.optimizer == OptimizerKind::mads ? "mads"
                              : cfg.vqe.optimizer == OptimizerKind::nelder_mead
                                  ? "nelder_mead"
                                  : "spsa"},
                {"max_evals", cfg.vqe.max_evals},
                {"restarts", cfg.vqe.restarts},
                {"layers", cfg.vqe.layers},
                {"theta_range", cfg.vqe.theta_range},
                {"omega_range", cfg.vqe.omega_range},
                {"shots_pre", cfg.shots_pre},
                {"shots_post", cfg.shots_post},
                {"blocks", cfg.blocks.n_blocks},
                {"layers_first", cfg.blocks.layers_first},
                {"layers_rest", cfg.blocks.layers_rest}};
  }
  if (cfg.kind == ExperimentKind::mps_sweep) {
    j["mps"] = {{"n_list", cfg.n_list},     {"s_list", cfg.s_list},
                {"chi_list", cfg.chi_list}, {"rsq_list", cfg.rsq_list},
                {"ell", cfg.mps_ell},       {"sweep_tol", cfg.sweep_tol}};
  }
  return j.dump(2);
}

RunOutcome run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case ExperimentKind::ed_sweep: return run_ed_sweep(cfg);
    case ExperimentKind::vqe_sweep: return run_vqe_sweep(cfg);
    case ExperimentKind::vqe_blockwise: return run_vqe_blockwise(cfg);
    case ExperimentKind::mps_sweep: return run_mps_sweep(cfg);
    case ExperimentKind::phase_report: return run_phase_report(cfg);
    case ExperimentKind::oracle_suite: {
      RunOutcome out;
      std::ostringstream os;
      bool ok = run_oracle_suite(os);
      out.summary = os.str();
      out.exit_code = ok ? 0 : 1;
      return out;
    }
  }
  throw std::invalid_argument("run_experiment: unknown experiment kind");
}

namespace {

StateVector random_state_for_oracle(BasisPtr basis, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  VectorXcd v(basis->total_dim());
  for (long i = 0; i < v.size(); ++i) v[i] = Complex(g(rng), g(rng));
  v.normalize();
  return StateVector{std::move(basis), std::move(v)};
}

}  // namespace

bool run_oracle_suite(std::ostream& out) {
  bool all_ok = true;
  auto check = [&](const std::string& name, const std::function<bool()>& fn) {
    bool ok = false;
    std::string note;
    try {
      ok = fn();
    } catch (const std::exception& ex) {
      ok = false;
      note = std::string(" (") + ex.what() + ")";
    }
    out << (ok ? "[PASS] " : "[FAIL] ") << name << note << "\n";
    all_ok = all_ok && ok;
  };

  check("truncated-ladder commutator defect", [] {
    auto d22 = truncation_defect(2, 2).matrix().diagonal();
    auto d11 = truncation_defect(1, 1).matrix().diagonal();
    bool ok = true;
    for (int i = 0; i < 4; ++i) ok = ok && std::abs(d22[i].real() - 0.5) < 1e-12;
    ok = ok && std::abs(d22[4].real() + 2.0) < 1e-12;
    ok = ok && std::abs(d11[0].real() - 1.0) < 1e-12 && std::abs(d11[2].real() + 2.0) < 1e-12;
    return ok;
  });

  check("beam-splitter excitation swap at t = pi/2g", [] {
    double g = 0.8;
    auto b = make_fock_basis(2, 2);
    auto H = beam_splitter_hamiltonian(0, 1, g, 0.0, {0.0, 0.0}, b);
    auto in = StateVector::product_state(b, {1, 0});
    auto target = StateVector::product_state(b, {0, 1});
    auto outv = evolve(H, M_PI / (2 * g), in);
    return std::abs(std::abs(target.amps.dot(outv.amps)) - 1.0) < 1e-10;
  });

  check("gauge elimination spectral equivalence (N=3, windows 1/3)", [] {
    ModelParams p;
    p.sites = 3;
    p.trunc = 1;
    p.rsq = 0.7;
    p.beta = 1.1;
    p.eps0 = 0.35;
    auto Hfull = build_full_gauge_hamiltonian(p, 3);
    auto idx = gauss_kernel_indices(p, 3);
    auto block = restrict_matrix(Hfull.matrix(), idx);
    auto Heff = build_effective_hamiltonian(p);
    auto sf = lowest_eigs(block, 27, false);
    auto se = lowest_eigs(Heff.matrix(), 27, false);
    return (sf.eigenvalues - se.eigenvalues).cwiseAbs().maxCoeff() < 1e-10;
  });

  check("boson-mapping diagonal rewrite (N=4)", [] {
    ModelParams p;
    p.sites = 4;
    p.n0 = 2;
    p.trunc = 2;
    p.rsq = 0.3;
    p.beta = 1.0;
    p.eps0 = 0.45;
    auto dh = build_hobm_hamiltonian(p).matrix().diagonal();
    auto de = build_effective_hamiltonian(p).matrix().diagonal();
    return (dh - de).cwiseAbs().maxCoeff() < 1e-10;
  });

  check("quartic expansion equals engineered interaction + constant", [] {
    for (int N : {1, 2}) {
      const int d = 6;
      auto b = make_fock_basis(N, d);
      auto oracle = squid_expansion_oracle(N, b);
      auto hnn = number_number_hamiltonian(1.0, std::vector<double>(N, 0.0), b);
      double c = 3.0 * N * (N - 1) + 3.0 * N;
      auto od = oracle.matrix().diagonal();
      auto hd = hnn.matrix().diagonal();
      for (long i = 0; i < b->total_dim(); ++i) {
        bool interior = true;
        for (int m = 0; m < N; ++m) interior = interior && b->level_of(i, m) <= d - 3;
        if (interior && std::abs(od[i] - hd[i] - c) > 1e-10) return false;
      }
    }
    return true;
  });

  check("heterodyne moment identity vs explicit noise mode", [] {
    auto sys = make_fock_basis(1, 7);
    std::vector<int> dims{9, 4};
    auto joint = make_basis(2, dims, ModeKind::fock);
    auto S = embed(joint, 0, local_destroy(9)) + embed(joint, 1, local_create(4));
    auto Sd = S.adjoint();
    for (int occ = 0; occ <= 4; ++occ) {
      auto psi = StateVector::product_state(sys, {occ});
      auto m = s_moments(psi);
      VectorXcd big = VectorXcd::Zero(joint->total_dim());
      big[joint->encode({occ, 0})] = 1.0;
      double s1 = big.dot(Sd.apply(S.apply(big))).real();
      double s2 = big.dot(Sd.apply(Sd.apply(S.apply(S.apply(big))))).real();
      if (std::abs(s1 - m.s1[0]) > 1e-10 || std::abs(s2 - m.s2[0]) > 1e-10) return false;
    }
    return true;
  });

  check("cost round trip over 100 random states", [] {
    ModelParams p;
    p.sites = 4;
    p.n0 = 2;
    p.trunc = 2;
    p.rsq = 0.3;
    p.beta = 1.0;
    p.eps0 = 0.45;
    auto H = build_hobm_hamiltonian(p);
    auto c = cost_coefficients(p);
    auto rng = make_rng(29);
    for (int rep = 0; rep < 100; ++rep) {
      auto psi = random_state_for_oracle(H.basis(), rng);
      double viaS = cost_from_moments(c, s_moments(psi));
      if (std::abs(viaS - expval(H, psi).real()) > 1e-9) return false;
    }
    return true;
  });

  check("variance: noise contraction equals joint-operator route", [] {
    ModelParams p;
    p.sites = 2;
    p.n0 = 2;
    p.rsq = 0.4;
    p.beta = 1.1;
    p.eps0 = 0.6;
    EnergyEstimator est(p, 5);
    auto rng = make_rng(37);
    for (int rep = 0; rep < 3; ++rep) {
      auto psi = random_state_for_oracle(est.basis(), rng);
      double fast = est.variance(psi);
      double joint = estimator_variance(psi, p, 3);
      if (std::abs(fast - joint) > 1e-8 * std::max(1.0, std::abs(joint))) return false;
    }
    return true;
  });

  check("noisy-cost statistics match sigma^2/M", [] {
    ModelParams p;
    p.sites = 2;
    p.n0 = 1;
    p.rsq = 0.5;
    p.beta = 1.0;
    EnergyEstimator est(p, 3);
    auto H = build_hobm_hamiltonian(p, 3);
    auto gs = low_spectrum(H, 1, 0.0, p.n0);
    StateVector psi{H.basis(), gs.eigenvectors.col(0)};
    ShotModel shot;
    shot.shots = 1000;
    auto rng = make_rng(57);
    const int draws = 10000;
    double mean = est.mean(psi), sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < draws; ++i) {
      double v = noisy_cost(psi, est, shot, rng);
      sum += v - mean;
      sum2 += (v - mean) * (v - mean);
    }
    double var_emp = sum2 / draws - std::pow(sum / draws, 2);
    double var_th = est.variance(psi) / shot.shots;
    return std::abs(var_emp - var_th) < 0.05 * var_th;
  });

  check("MPO dense reconstruction (N=4, s=1)", [] {
    ModelParams p;
    p.sites = 4;
    p.rsq = 0.3;
    p.beta = 1.0;
    p.eps0 = 0.45;
    p.ell = 1.5;
    p.trunc = 1;
    auto H = build_spin_hamiltonian(p, 1);
    auto dense = mpo_dense(build_mpo(p, 1));
    return (dense - H.dense().real()).cwiseAbs().maxCoeff() < 1e-10;
  });

  check("DMRG matches the exact sector block (N=6, s=1)", [] {
    ModelParams p;
    p.sites = 6;
    p.rsq = 0.3;
    p.beta = 1.0;
    p.eps0 = 0.4;
    p.ell = 18.0;
    p.trunc = 1;
    DmrgOptions opt;
    opt.chi = 24;
    auto res = dmrg(build_mpo(p, 1), opt,
                    MpsState::product_state(6, 3, std::vector<int>(6, 1)));
    ModelParams p0 = p;
    p0.ell = 0.0;
    auto block = low_spectrum(build_spin_hamiltonian(p0, 1), 1, 0.0);
    return std::abs(res.energy - block.eigenvalues[0]) < 1e-8;
  });

  check("analytic jump bracket agrees with exact diagonalization", [] {
    ModelParams p;
    p.sites = 4;
    p.trunc = 2;
    p.rsq = 0.3;
    p.beta = 1.0;
    double predicted = predict_jump(p).jump_eps0;  // 1.611
    auto pts = ed_sweep(p, Formulation::effective, {1.6, 1.7});
    bool bracketed = std::abs(pts[0].efd - pts[1].efd) > 0.5;
    return bracketed && predicted > 1.6 && predicted < 1.7;
  });

  return all_ok;
}

std::string verify_report(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "experiment: " << to_string(cfg.kind) << "\n";
  os << "output_dir: " << cfg.output_dir << "\n";
  os << "seed: " << cfg.seed << "\n";
  os << "grid points: " << cfg.eps0_grid.size() << "\n";

  auto mem_mb = [](double dim) { return dim * dim * 16.0 / 1048576.0; };
  switch (cfg.kind) {
    case ExperimentKind::ed_sweep:
    case ExperimentKind::phase_report: {
      double dim = 1.0;
      int d = cfg.formulation == Formulation::hobm
                  ? cfg.model.trunc
                  : 2 * cfg.model.trunc + 1;
      for (int i = 0; i < cfg.model.sites; ++i) dim *= d;
      os << "basis dimension per point: " << dim << "\n";
      if (dim <= 2000)
        os << "dense eigensolver estimate: " << mem_mb(dim) << " MB\n";
      else
        os << "sparse eigensolver path (dimension > 2000)\n";
      if (dim > 1e5) os << "resource warning: dimension exceeds the desk-scale target\n";
      break;
    }
    case ExperimentKind::vqe_sweep: {
      double dim = std::pow(static_cast<double>(cfg.model.trunc), cfg.model.sites);
      os << "fock dimension per point: " << dim << "\n";
      double gates = 2.0 * cfg.vqe.layers;
      double total_shots = 0.0;
      for (double e : cfg.eps0_grid) {
        auto b = shot_budget(gates, cfg.vqe.restarts, cfg.vqe.max_evals,
                             point_shots(cfg, e));
        total_shots += b.total_shots;
      }
      auto agg = shot_budget(gates, 1, 1, total_shots);
      os << "gates per circuit: " << gates << "\n";
      os << "predicted shots over the sweep: " << agg.total_shots << "\n";
      os << "predicted wall time at 1e-7 s per gate-shot: " << agg.seconds << " s\n";
      os << "feasible within 1e11 shots/day: " << (agg.feasible ? "yes" : "no") << "\n";
      break;
    }
    case ExperimentKind::vqe_blockwise: {
      double gates = 0.0;
      for (int b = 0; b < cfg.blocks.n_blocks; ++b)
        gates += 2.0 * cfg.blocks.layers_of(b) * BlockSpec::pairs(cfg.model.sites);
      double total_shots = 0.0;
      bool any_finite = false;
      std::vector<double> ms = cfg.shots_list;
      if (ms.empty()) ms.push_back(std::numeric_limits<double>::infinity());
      for (double m : ms) {
        if (std::isinf(m)) continue;
        any_finite = true;
        total_shots += cfg.eps0_grid.size() * cfg.blocks.n_blocks * cfg.vqe.restarts *
                       static_cast<double>(cfg.vqe.max_evals) * m;
      }
      os << "gates per full circuit: " << gates << "\n";
      if (any_finite) {
        auto agg = shot_budget(gates, 1, 1, total_shots);
        os << "predicted shots over the sweep: " << agg.total_shots << "\n";
        os << "feasible within 1e11 shots/day: " << (agg.feasible ? "yes" : "no") << "\n";
      } else {
        os << "noiseless (M = inf): no shot budget consumed\n";
      }
      break;
    }
    case ExperimentKind::mps_sweep: {
      int max_n = *std::max_element(cfg.n_list.begin(), cfg.n_list.end());
      int max_chi = *std::max_element(cfg.chi_list.begin(), cfg.chi_list.end());
      int max_s = *std::max_element(cfg.s_list.begin(), cfg.s_list.end());
      int d = 2 * max_s + 1;
      double tensor_mb = static_cast<double>(max_n) * d * max_chi * max_chi * 8.0 /
                         1048576.0;
      os << "largest run: N = " << max_n << ", s = " << max_s << ", chi = " << max_chi
         << "\n";
      os << "MPS memory estimate: " << tensor_mb << " MB\n";
      double cost = static_cast<double>(max_n) * max_chi * max_chi * max_chi * d * 5;
      if (max_n >= 100 && max_s >= 2 && max_chi >= 100)
        os << "resource warning: N/s/chi combination is beyond the desk-scale target\n";
      else if (cost > 5e9)
        os << "resource note: large sweep, expect long runtimes\n";
      break;
    }
    case ExperimentKind::oracle_suite:
      os << "runs the bundled numerical oracles, no resources to estimate\n";
      break;
  }
  return os.str();
}

}  // namespace higgslab
