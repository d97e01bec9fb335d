#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "higgslab/exact.hpp"
#include "higgslab/rng.hpp"

using namespace higgslab;

TEST_CASE("lowest_eigs on a diagonal matrix returns the sorted diagonal") {
  const int n = 40;
  std::vector<double> vals;
  auto rng = make_rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<Eigen::Triplet<Complex>> trips;
  for (int i = 0; i < n; ++i) {
    vals.push_back(u(rng));
    trips.emplace_back(i, i, Complex(vals.back(), 0.0));
  }
  SparseCd m(n, n);
  m.setFromTriplets(trips.begin(), trips.end());
  auto s = lowest_eigs(m, 5);
  std::sort(vals.begin(), vals.end());
  for (int i = 0; i < 5; ++i) CHECK(s.eigenvalues[i] == doctest::Approx(vals[i]));
}

TEST_CASE("sector restriction errors") {
  ModelParams p;
  p.sites = 2;
  p.trunc = 1;
  SparseOp H = build_effective_hamiltonian(p);
  CHECK_THROWS_AS(low_spectrum(H, 100, 0.0), std::invalid_argument);  // k > block
  CHECK_THROWS_AS(low_spectrum(H, 1, 99.0), std::invalid_argument);   // empty sector
}

TEST_CASE("ED sweep of the Fig. 3 model") {
  ModelParams p;
  p.sites = 4;
  p.trunc = 2;
  p.rsq = 0.3;
  p.beta = 1.0;

  SUBCASE("EFD slope is close to one before the transition") {
    std::vector<double> grid;
    for (double e = 0.1; e < 1.45; e += 0.1) grid.push_back(e);
    auto pts = ed_sweep(p, Formulation::effective, grid);
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
      double slope = (pts[i + 1].efd - pts[i].efd) / (pts[i + 1].eps0 - pts[i].eps0);
      CHECK(std::abs(slope - 1.0) < 0.05);
    }
  }
  SUBCASE("ground-state energy develops a cusp at the jump") {
    std::vector<double> grid{1.4, 1.5, 1.6, 1.7, 1.8, 1.9};
    auto pts = ed_sweep(p, Formulation::effective, grid);
    // discrete second difference spikes at the crossing cell
    std::vector<double> d2;
    for (size_t i = 1; i + 1 < pts.size(); ++i)
      d2.push_back(std::abs(pts[i + 1].energy - 2 * pts[i].energy + pts[i - 1].energy));
    double peak = *std::max_element(d2.begin(), d2.end());
    double background = *std::min_element(d2.begin(), d2.end());
    CHECK(peak > 20.0 * std::max(background, 1e-6));
  }
  SUBCASE("hobm and effective formulations agree at weak coupling") {
    ModelParams q = p;
    q.n0 = 2;
    q.eps0 = 0.4;
    auto eff = ed_sweep(q, Formulation::effective, {0.4});
    ModelParams qh = q;
    qh.trunc = 5;  // fock dimension 2 N0 + 1
    auto hob = ed_sweep(qh, Formulation::hobm, {0.4});
    // same diagonal physics, hopping amplitudes differ by the truncated
    // boson normalization; at R^2 = 0.3 they agree to a few percent
    CHECK(std::abs(eff[0].efd - hob[0].efd) < 5e-2);
    CHECK(std::abs(eff[0].energy - hob[0].energy) < 5e-2);
  }
}

TEST_CASE("eigenvector residuals stay below the solver contract") {
  ModelParams p;
  p.sites = 3;
  p.trunc = 2;
  p.rsq = 0.5;
  p.beta = 1.0;
  p.eps0 = 0.7;
  SparseOp H = build_effective_hamiltonian(p);
  auto s = low_spectrum(H, 3, 0.0);
  for (int i = 0; i < 3; ++i) {
    VectorXcd r = H.matrix() * s.eigenvectors.col(i) -
                  s.eigenvalues[i] * s.eigenvectors.col(i);
    CHECK(r.norm() < 1e-9);
  }
}
