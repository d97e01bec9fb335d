#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "higgslab/circuit.hpp"
#include "higgslab/exact.hpp"
#include "higgslab/measurement.hpp"
#include "higgslab/mps.hpp"
#include "higgslab/phases.hpp"
#include "higgslab/vqe.hpp"

namespace py = pybind11;
using namespace higgslab;

namespace {

Formulation formulation_from(const std::string& s) {
  if (s == "effective") return Formulation::effective;
  if (s == "hobm") return Formulation::hobm;
  if (s == "spin") return Formulation::spin;
  throw std::invalid_argument("formulation must be 'effective', 'hobm' or 'spin'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "lattice U(1) Higgs model laboratory (C++ core)";

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init<>())
      .def_readwrite("sites", &ModelParams::sites)
      .def_readwrite("beta", &ModelParams::beta)
      .def_readwrite("rsq", &ModelParams::rsq)
      .def_readwrite("eps0", &ModelParams::eps0)
      .def_readwrite("ell", &ModelParams::ell)
      .def_readwrite("n0", &ModelParams::n0)
      .def_readwrite("trunc", &ModelParams::trunc);

  m.def("effective_hamiltonian",
        [](const ModelParams& p) { return build_effective_hamiltonian(p).dense(); },
        py::arg("params"), "gauge-eliminated Hamiltonian as a dense matrix");
  m.def("hobm_hamiltonian",
        [](const ModelParams& p, int d) { return build_hobm_hamiltonian(p, d).dense(); },
        py::arg("params"), py::arg("d") = -1);
  m.def("spin_hamiltonian",
        [](const ModelParams& p, int s) { return build_spin_hamiltonian(p, s).dense(); },
        py::arg("params"), py::arg("s"));
  m.def("full_gauge_hamiltonian",
        [](const ModelParams& p, int link_cutoff) {
          return build_full_gauge_hamiltonian(p, link_cutoff).dense();
        },
        py::arg("params"), py::arg("link_cutoff"));
  m.def("truncation_defect",
        [](int k, int n0) { return truncation_defect(k, n0).dense(); }, py::arg("k"),
        py::arg("n0"));
  m.def("beam_splitter_hamiltonian",
        [](int c, int d, double g, double lambda, const std::vector<double>& omegas,
           int n_modes, int dim) {
          return beam_splitter_hamiltonian(c, d, g, lambda, omegas,
                                           make_fock_basis(n_modes, dim))
              .dense();
        },
        py::arg("c"), py::arg("d"), py::arg("g"), py::arg("lam"), py::arg("omegas"),
        py::arg("n_modes"), py::arg("dim"));
  m.def("number_number_hamiltonian",
        [](double gp, const std::vector<double>& omegas, int n_modes, int dim) {
          return number_number_hamiltonian(gp, omegas, make_fock_basis(n_modes, dim))
              .dense();
        },
        py::arg("g_prime"), py::arg("omegas"), py::arg("n_modes"), py::arg("dim"));
  m.def("squid_expansion_oracle",
        [](int n_modes, int dim) {
          return squid_expansion_oracle(n_modes, make_fock_basis(n_modes, dim)).dense();
        },
        py::arg("n_modes"), py::arg("dim"));

  m.def("ed_sweep",
        [](const ModelParams& p, const std::string& formulation,
           const std::vector<double>& grid) {
          auto pts = ed_sweep(p, formulation_from(formulation), grid);
          py::dict out;
          std::vector<double> e0, efd, gap;
          for (const auto& q : pts) {
            e0.push_back(q.energy);
            efd.push_back(q.efd);
            gap.push_back(q.gap);
          }
          out["eps0"] = grid;
          out["energy"] = e0;
          out["efd"] = efd;
          out["gap"] = gap;
          return out;
        },
        py::arg("params"), py::arg("formulation"), py::arg("eps0_grid"));

  m.def("predict_jump", [](const ModelParams& p) {
    auto j = predict_jump(p);
    py::dict out;
    out["eps0"] = j.jump_eps0;
    out["pre_state"] = j.pre_state;
    out["post_state"] = j.post_state;
    out["regime_advisory"] = j.regime_advisory;
    return out;
  });
  m.def("limiting_efd", &limiting_efd, py::arg("eps0"));
  m.def("charge_conjugation_check", &charge_conjugation_check, py::arg("params"));

  m.def("estimator_stats",
        [](const ModelParams& p, int d, const VectorXcd& amplitudes) {
          EnergyEstimator est(p, d);
          StateVector psi{est.basis(), amplitudes};
          psi.normalize();
          return py::make_tuple(est.mean(psi), est.variance(psi));
        },
        py::arg("params"), py::arg("d"), py::arg("amplitudes"),
        "mean and single-shot variance of the heterodyne energy estimator");
  m.def("shot_budget",
        [](double gates, double runs, double evals, double M) {
          auto b = shot_budget(gates, runs, evals, M);
          py::dict out;
          out["total_shots"] = b.total_shots;
          out["seconds"] = b.seconds;
          out["feasible"] = b.feasible;
          return out;
        },
        py::arg("gates_per_circuit"), py::arg("runs"), py::arg("evals_per_run"),
        py::arg("shots"));

  m.def("vqe_ground",
        [](const ModelParams& p, int layers, int max_evals, int restarts, double shots,
           std::uint64_t seed) {
          VqeConfig cfg;
          cfg.layers = layers;
          cfg.max_evals = max_evals;
          cfg.restarts = restarts;
          cfg.shot.shots = shots;
          cfg.seed = seed;
          auto res = run_vqe_point(p, AnsatzSpec::c14(p.sites, layers), cfg);
          py::dict out;
          out["energy"] = res.energy;
          out["efd"] = res.efd;
          out["fidelity"] = res.fidelity;
          out["e0"] = res.e0;
          out["e1"] = res.e1;
          out["n_success"] = res.n_success;
          return out;
        },
        py::arg("params"), py::arg("layers") = 3, py::arg("max_evals") = 500,
        py::arg("restarts") = 3,
        py::arg("shots") = std::numeric_limits<double>::infinity(), py::arg("seed") = 1);

  m.def("dmrg_ground",
        [](const ModelParams& p, int s, int chi, double sweep_tol) {
          Mpo mpo = build_mpo(p, s);
          DmrgOptions opt;
          opt.chi = chi;
          opt.sweep_tol = sweep_tol;
          auto res = dmrg(mpo, opt,
                          MpsState::product_state(p.sites, 2 * s + 1,
                                                  std::vector<int>(p.sites, s)));
          py::dict out;
          out["energy"] = res.energy;
          out["efd"] = efd(sz_profile(res.state), p);
          out["converged"] = res.converged;
          out["max_bond"] = res.state.max_bond();
          return out;
        },
        py::arg("params"), py::arg("s"), py::arg("chi") = 32,
        py::arg("sweep_tol") = 1e-9);

  m.def("jump_location",
        [](const std::vector<double>& eps0,
           const std::vector<double>& efd_values) -> py::object {
          std::vector<std::pair<double, double>> curve;
          for (size_t i = 0; i < eps0.size(); ++i)
            curve.push_back({eps0[i], efd_values[i]});
          auto j = jump_location(curve);
          if (!j) return py::none();
          return py::make_tuple(j->eps0, j->error);
        },
        py::arg("eps0"), py::arg("efd"));

#ifdef HIGGSLAB_VERSION
  m.attr("__version__") = HIGGSLAB_VERSION;
#else
  m.attr("__version__") = "dev";
#endif
}
