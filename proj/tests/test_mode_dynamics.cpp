#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "xyqcr/errors.hpp"
#include "xyqcr/mode_dynamics.hpp"

using namespace xyqcr;

namespace {
constexpr double kPi = std::numbers::pi;

// Independent route to the equilibrium contractions: direct thermal block
// states + hand-rolled quadrature, bypassing PreparedQuench entirely.
Contractions equilibrium_contractions_direct(double h0, double gamma, Temperature T,
                                             const MomentumGrid& grid) {
  const ModelParams p{1.0, gamma, h0};
  double n0 = 0.0, g1 = 0.0;
  cplx k1{};
  for (std::size_t m = 0; m < grid.size(); ++m) {
    const double phi = grid.nodes[m];
    const double w = grid.weights[m] / kPi;
    const ModeState st = thermal_block_state(phi, p, T);
    const auto ex = mode_expectations(st);
    const double nbar = st.even_block(1, 1).real() + 0.5 * (st.odd_pops[0] + st.odd_pops[1]);
    n0 += w * nbar;
    g1 += w * std::cos(phi) * nbar;
    k1 += w * cplx(0.0, -std::sin(phi)) * ex.kappa_p;
  }
  return Contractions{n0, cplx(g1, 0.0), k1};
}

double max_field_diff(const TwoSiteState& a, const TwoSiteState& b) {
  return std::max({std::abs(a.mz - b.mz), std::abs(a.cxx - b.cxx), std::abs(a.cyy - b.cyy),
                   std::abs(a.czz - b.czz), std::abs(a.cxy - b.cxy)});
}
}  // namespace

TEST_CASE("thermal_block_state: maximally mixed limit") {
  const ModelParams p{1.0, 0.8, 0.5};
  const ModeState st = thermal_block_state(1.1, p, Temperature::of(1e6));
  CHECK(std::abs(st.even_block(0, 0).real() - 0.25) < 1e-5);
  CHECK(std::abs(st.even_block(1, 1).real() - 0.25) < 1e-5);
  CHECK(std::abs(st.odd_pops[0] - 0.25) < 1e-5);
  CHECK(std::abs(st.odd_pops[1] - 0.25) < 1e-5);
  st.validate();
}

TEST_CASE("thermal_block_state: T = Zero is the even-sector ground projector") {
  const ModelParams p{1.0, 0.8, 0.5};
  const ModeState st = thermal_block_state(2.2, p, Temperature::zero());
  const double purity = (st.even_block * st.even_block).trace().real();
  CHECK(std::abs(purity - 1.0) < 1e-12);
  CHECK(st.odd_pops[0] == 0.0);
  CHECK(st.odd_pops[1] == 0.0);
  st.validate();
}

TEST_CASE("thermal_block_state: Gibbs weights vs independent scalar computation") {
  // (phi = pi/2, h = 1, gamma = 0.8, T = 1): level energies are {-L, +L, 0, 0}
  const double phi = kPi / 2, T = 1.0;
  const ModelParams p{1.0, 0.8, 1.0};
  const double lam = dispersion(phi, p.h, p.gamma);

  // independent scalar Gibbs oracle
  const double qg = std::exp(lam / T), qe = std::exp(-lam / T), qo = 1.0;
  const double z = qg + qe + 2.0 * qo;

  const ModeState st = thermal_block_state(phi, p, Temperature::of(T));
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(st.even_block);
  CHECK(std::abs(es.eigenvalues()(1) - qg / z) < 1e-13);  // ground level has the bigger weight
  CHECK(std::abs(es.eigenvalues()(0) - qe / z) < 1e-13);
  CHECK(std::abs(st.odd_pops[0] - qo / z) < 1e-13);
  CHECK(std::abs(st.odd_pops[1] - qo / z) < 1e-13);

  const double tr = st.even_block.trace().real() + st.odd_pops[0] + st.odd_pops[1];
  CHECK(std::abs(tr - 1.0) < 1e-12);
}

TEST_CASE("Temperature rejects negative values") {
  CHECK_THROWS_AS(Temperature::of(-0.1), NegativeTemperature);
  CHECK(Temperature::of(0.0).is_zero());
  CHECK(Temperature::zero().is_zero());
}

TEST_CASE("evolve_block: identity, stationarity, purity") {
  const ModelParams p0{1.0, 0.8, 0.5};
  const ModelParams p1{1.0, 0.8, 1.3};
  const ModeState st = thermal_block_state(1.7, p0, Temperature::of(0.4));

  SUBCASE("t = 0 is the identity") {
    const ModeState out = evolve_block(st, p1, 0.0);
    CHECK((out.even_block - st.even_block).cwiseAbs().maxCoeff() < 1e-14);
  }

  SUBCASE("h1 = h0 leaves the thermal state invariant") {
    for (double t : {0.3, 1.0, 8.0}) {
      const ModeState out = evolve_block(st, p0, t);
      CHECK((out.even_block - st.even_block).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  SUBCASE("unitary invariants: trace, eigenvalues, purity") {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es0(st.even_block, Eigen::EigenvaluesOnly);
    for (double t : {0.1, 1.0, 10.0}) {
      const ModeState out = evolve_block(st, p1, t);
      CHECK(std::abs((out.even_block - st.even_block).trace()) < 1e-12);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(out.even_block, Eigen::EigenvaluesOnly);
      CHECK(std::abs(es.eigenvalues()(0) - es0.eigenvalues()(0)) < 1e-12);
      const double pur0 = (st.even_block * st.even_block).trace().real();
      const double pur = (out.even_block * out.even_block).trace().real();
      CHECK(std::abs(pur - pur0) < 1e-12);
      CHECK(out.odd_pops[0] == st.odd_pops[0]);
    }
  }
}

TEST_CASE("mode_expectations: hand-built states") {
  ModeState mixed;
  mixed.phi = 1.0;
  mixed.even_block = 0.25 * Eigen::Matrix2cd::Identity();
  mixed.odd_pops = {0.25, 0.25};
  const auto em = mode_expectations(mixed);
  CHECK(em.n_p == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(em.kappa_p) < 1e-15);

  ModeState vacuum;
  vacuum.phi = 1.0;
  vacuum.even_block << 1.0, 0.0, 0.0, 0.0;
  vacuum.odd_pops = {0.0, 0.0};
  const auto ev = mode_expectations(vacuum);
  CHECK(ev.n_p == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(std::abs(ev.kappa_p) < 1e-15);
}

TEST_CASE("ModeState::validate rejects broken states") {
  ModeState bad;
  bad.even_block = 0.6 * Eigen::Matrix2cd::Identity();
  bad.odd_pops = {0.3, 0.3};  // trace 1.8
  CHECK_THROWS_AS(bad.validate(), InvalidState);
}

TEST_CASE("contractions: infinite-temperature limit") {
  const QuenchProtocol q{0.5, 1.0, std::nullopt};
  const Contractions c = contractions(q, 0.8, Temperature::of(1e6), 0.9, pooled_grid(256));
  CHECK(std::abs(c.n0 - 0.5) < 1e-5);
  CHECK(std::abs(c.g1) < 1e-5);
  CHECK(std::abs(c.k1) < 1e-5);
}

TEST_CASE("two_site_state: equilibrium reduction at t = 0") {
  const MomentumGrid& grid = pooled_grid(1024);
  for (double T : {0.0, 0.2, 1.0}) {
    const Temperature temp = T == 0.0 ? Temperature::zero() : Temperature::of(T);
    const QuenchProtocol q{0.5, 1.0, std::nullopt};

    const TwoSiteState dyn = two_site_state(q, 0.8, temp, 0.0, grid);
    const Contractions eq = equilibrium_contractions_direct(0.5, 0.8, temp, grid);
    const TwoSiteState ref = wick_two_site(eq);

    CHECK(max_field_diff(dyn, ref) < 1e-10);
    CHECK(std::abs(dyn.cxy) < 1e-10);  // off-diagonal correlators vanish at t = 0
  }
}

TEST_CASE("two_site_state: T -> infinity kills every field") {
  const QuenchProtocol q{0.2, 1.0, std::nullopt};
  const TwoSiteState s = two_site_state(q, 0.8, Temperature::of(1e6), 1.3, pooled_grid(256));
  CHECK(std::abs(s.mz) < 1e-5);
  CHECK(std::abs(s.cxx) < 1e-5);
  CHECK(std::abs(s.cyy) < 1e-5);
  CHECK(std::abs(s.czz) < 1e-5);
  CHECK(std::abs(s.cxy) < 1e-5);
}

TEST_CASE("two_site_state: stationarity for h1 = h0") {
  const QuenchProtocol q{0.7, 0.7, std::nullopt};
  const MomentumGrid& grid = pooled_grid(1024);
  const TwoSiteState ref = two_site_state(q, 0.8, Temperature::of(0.3), 0.0, grid);
  for (double t : {0.5, 2.0, 7.0}) {
    const TwoSiteState s = two_site_state(q, 0.8, Temperature::of(0.3), t, grid);
    CHECK(max_field_diff(s, ref) < 1e-10);
  }
}

TEST_CASE("two_site_state: cxy vanishes at t = 0, grows after the quench") {
  const QuenchProtocol q{0.2, 1.0, std::nullopt};
  const MomentumGrid& grid = pooled_grid(1024);
  const TwoSiteState s0 = two_site_state(q, 0.8, Temperature::zero(), 0.0, grid);
  CHECK(std::abs(s0.cxy) < 1e-12);
  const TwoSiteState s1 = two_site_state(q, 0.8, Temperature::zero(), 0.8, grid);
  CHECK(std::abs(s1.cxy) > 1e-4);
}

TEST_CASE("PreparedQuench: scan agrees with pointwise evaluation") {
  const QuenchProtocol q{0.5, 1.0, std::nullopt};
  const PreparedQuench pq(q, 0.8, Temperature::of(0.05), pooled_grid(512));
  const double dt = 0.37;
  const auto states = pq.scan(0.0, dt, 40);
  REQUIRE(states.size() == 40);
  for (int k : {0, 1, 7, 23, 39}) {
    const TwoSiteState direct = pq.two_site_at(k * dt);
    CHECK(max_field_diff(states[k], direct) < 1e-11);
  }
}

TEST_CASE("quadrature convergence: doubling the default grid barely moves fields") {
  const QuenchProtocol q{0.8, 1.0, std::nullopt};
  const Temperature T = Temperature::of(0.05);
  const PreparedQuench coarse(q, 0.8, T, pooled_grid(2048));
  const PreparedQuench fine(q, 0.8, T, pooled_grid(4096));
  for (double t : {0.0, 1.1, 4.7, 13.0}) {
    CHECK(max_field_diff(coarse.two_site_at(t), fine.two_site_at(t)) < 1e-8);
  }
}

TEST_CASE("prepare_quench: adaptive grid settles and matches fixed-grid results") {
  const QuenchProtocol q{0.5, 1.0, std::nullopt};
  GridSpec spec;
  spec.nodes = 512;
  const PreparedQuench pq = prepare_quench(q, 0.8, Temperature::of(0.1), spec);
  CHECK(pq.mode_count() >= 512);
  const TwoSiteState a = pq.two_site_at(2.0);
  const TwoSiteState b = two_site_state(q, 0.8, Temperature::of(0.1), 2.0, pooled_grid(4096));
  CHECK(max_field_diff(a, b) < 1e-9);
}

TEST_CASE("negative time rejected") {
  const QuenchProtocol q{0.5, 1.0, std::nullopt};
  CHECK_THROWS_AS(two_site_state(q, 0.8, Temperature::zero(), -0.5, pooled_grid(64)), ConfigError);
}
