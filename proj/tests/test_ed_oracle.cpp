#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "xyqcr/ed_oracle.hpp"
#include "xyqcr/errors.hpp"
#include "xyqcr/lattice_model.hpp"
#include "xyqcr/observables.hpp"

using namespace xyqcr;

namespace {

// Independent Hamiltonian construction via explicit Kronecker products, the
// oracle for the bit-twiddled builder. Basis index bit j = 1 <=> sigma^z_j = +1,
// site 0 on the fastest index.
Eigen::MatrixXd kron_hamiltonian(int N, const ModelParams& p) {
  using Mc = Eigen::MatrixXcd;
  Eigen::Matrix2cd sx, sy, sz, id2 = Eigen::Matrix2cd::Identity();
  sx << 0, 1, 1, 0;
  sy << 0, cplx(0, 1), cplx(0, -1), 0;  // (down, up) ordering
  sz << -1, 0, 0, 1;

  auto site_op = [&](const Eigen::Matrix2cd& op, int j) {
    Mc out = Mc::Identity(1, 1);
    for (int m = N - 1; m >= 0; --m) {
      const Eigen::Matrix2cd& cell = (m == j) ? op : id2;
      Mc next(out.rows() * 2, out.cols() * 2);
      for (int i = 0; i < out.rows(); ++i)
        for (int k = 0; k < out.cols(); ++k) next.block(2 * i, 2 * k, 2, 2) = out(i, k) * cell;
      out = std::move(next);
    }
    return out;
  };

  const int dim = 1 << N;
  Mc h = Mc::Zero(dim, dim);
  for (int j = 0; j < N; ++j) {
    const int j2 = (j + 1) % N;
    h += 0.25 * p.J * (1.0 + p.gamma) * site_op(sx, j) * site_op(sx, j2);
    h += 0.25 * p.J * (1.0 - p.gamma) * site_op(sy, j) * site_op(sy, j2);
    h += 0.5 * p.h * p.J * site_op(sz, j);
  }
  return h.real();
}

}  // namespace

TEST_CASE("DenseSpinSystem matches an independent Kronecker construction") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> uh(-1.5, 1.5), ug(0.0, 1.0);
  for (int N : {2, 3, 4}) {
    const ModelParams p{1.0, ug(rng), uh(rng)};
    DenseSpinSystem sys = DenseSpinSystem::build(N, p);
    const Eigen::MatrixXd ref = kron_hamiltonian(N, p);
    CHECK((sys.hamiltonian() - ref).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("N = 2 pure-exchange spectrum is symmetric about zero") {
  DenseSpinSystem sys = DenseSpinSystem::build(2, ModelParams{1.0, 1.0, 0.0});
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sys.hamiltonian(), Eigen::EigenvaluesOnly);
  const auto& w = es.eigenvalues();
  for (int k = 0; k < w.size(); ++k)
    CHECK(std::abs(w(k) + w(w.size() - 1 - k)) < 1e-12);
}

TEST_CASE("symmetries: parity exact, translation exact") {
  DenseSpinSystem sys = DenseSpinSystem::build(8, ModelParams{1.0, 0.8, 0.5});
  CHECK(ed::parity_defect(sys) == 0.0);
  CHECK(ed::translation_defect(sys) < 1e-12);
}

TEST_CASE("ground energy per site matches the even-sector free-fermion sum") {
  for (int N : {8, 10}) {
    DenseSpinSystem sys = DenseSpinSystem::build(N, ModelParams{1.0, 0.8, 0.5});
    const MomentumGrid g = antiperiodic_grid(N);
    double e_ff = 0.0;
    for (double phi : g.nodes) e_ff -= dispersion(phi, 0.5, 0.8);
    e_ff /= N;
    CHECK(std::abs(sys.ground().first / N - e_ff) < 1e-10);
  }
}

TEST_CASE("thermal_observables: limits and equilibrium structure") {
  DenseSpinSystem sys = DenseSpinSystem::build(8, ModelParams{1.0, 0.8, 0.5});

  SUBCASE("infinite temperature: everything uncorrelated") {
    const auto obs = ed::thermal_observables(sys, Temperature::of(1e9));
    CHECK(std::abs(obs.state.mz) < 1e-8);
    CHECK(std::abs(obs.state.cxx) < 1e-8);
    CHECK(std::abs(obs.state.cyy) < 1e-8);
    CHECK(std::abs(obs.state.czz) < 1e-8);
    CHECK(std::abs(obs.state.cxy) < 1e-8);
  }

  SUBCASE("off-diagonal correlators vanish in equilibrium") {
    for (double T : {0.0, 0.2, 1.0}) {
      const Temperature temp = T == 0.0 ? Temperature::zero() : Temperature::of(T);
      const auto obs = ed::thermal_observables(sys, temp);
      CHECK(std::abs(obs.state.cxy) < 1e-12);
    }
  }

  SUBCASE("translation invariance across every bond") {
    for (int j = 0; j < 8; ++j) {
      const auto f0 = ed::thermal_bond_fields(sys, Temperature::of(0.5), 0);
      const auto fj = ed::thermal_bond_fields(sys, Temperature::of(0.5), j);
      CHECK(std::abs(fj.cxx - f0.cxx) < 1e-10);
      CHECK(std::abs(fj.cyy - f0.cyy) < 1e-10);
      CHECK(std::abs(fj.czz - f0.czz) < 1e-10);
      CHECK(std::abs(fj.mz_a - f0.mz_a) < 1e-10);
      CHECK(std::abs(fj.cxy - f0.cxy) < 1e-10);
    }
  }

  SUBCASE("cxy = cyx for evolved states as well") {
    DenseSpinSystem sys1 = DenseSpinSystem::build(8, ModelParams{1.0, 0.8, 1.0});
    const auto& [evals, evecs] = sys1.eigen();
    const Eigen::VectorXd a = evecs.transpose() * sys.ground().second;
    for (double t : {0.6, 1.7}) {
      Eigen::VectorXcd b(a.size());
      for (Eigen::Index k = 0; k < a.size(); ++k) b(k) = a(k) * std::polar(1.0, -evals(k) * t);
      const Eigen::VectorXcd psi = evecs.cast<cplx>() * b;
      const auto f = ed::bond_fields(psi, 8, 0);
      CHECK(std::abs(f.cxy) > 1e-6);  // genuinely nonzero out of equilibrium
      CHECK(std::abs(f.cxy - f.cyx) < 1e-12);
    }
  }
}

TEST_CASE("evolve_observables: identities") {
  DenseSpinSystem sys0 = DenseSpinSystem::build(8, ModelParams{1.0, 0.8, 0.2});
  DenseSpinSystem sys1 = DenseSpinSystem::build(8, ModelParams{1.0, 0.8, 1.0});

  SUBCASE("t = 0 reproduces the thermal state") {
    for (double T : {0.0, 0.3}) {
      const Temperature temp = T == 0.0 ? Temperature::zero() : Temperature::of(T);
      const TwoSiteState a = ed::evolve_observables(sys0, sys1, temp, 0.0);
      const TwoSiteState b = ed::thermal_observables(sys0, temp).state;
      CHECK(std::abs(a.mz - b.mz) < 1e-11);
      CHECK(std::abs(a.cxx - b.cxx) < 1e-11);
      CHECK(std::abs(a.cyy - b.cyy) < 1e-11);
      CHECK(std::abs(a.czz - b.czz) < 1e-11);
      CHECK(std::abs(a.cxy - b.cxy) < 1e-11);
    }
  }

  SUBCASE("h1 = h0 is stationary") {
    const TwoSiteState ref = ed::thermal_observables(sys0, Temperature::of(0.3)).state;
    for (double t : {0.7, 2.3}) {
      const TwoSiteState s = ed::evolve_observables(sys0, sys0, Temperature::of(0.3), t);
      CHECK(std::abs(s.cxx - ref.cxx) < 1e-11);
      CHECK(std::abs(s.czz - ref.czz) < 1e-11);
    }
  }

  SUBCASE("energy under H1 is conserved") {
    const double e1 = ed::evolved_energy(sys0, sys1, Temperature::of(0.3), 0.0);
    for (double t : {0.5, 1.9, 6.1}) {
      CHECK(std::abs(ed::evolved_energy(sys0, sys1, Temperature::of(0.3), t) - e1) < 1e-10);
    }
  }
}

TEST_CASE("pulse_energy: zeros and reality") {
  DenseSpinSystem sys0 = DenseSpinSystem::build(8, ModelParams{1.0, 0.8, 0.95});
  DenseSpinSystem sys1 = DenseSpinSystem::build(8, ModelParams{1.0, 0.8, 1.0});

  CHECK(ed::pulse_energy(sys0, sys1, Temperature::zero(), 0.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(std::abs(ed::pulse_energy(sys0, sys1, Temperature::of(0.4), 0.0)) < 1e-12);

  // imaginary residuals on the evolved state stay at rounding level
  const Eigen::VectorXcd psi0 = sys0.ground().second.cast<cplx>();
  const auto f = ed::bond_fields(psi0, 8, 0);
  CHECK(f.imag_residual < 1e-12);

  CHECK(ed::pulse_energy(sys0, sys1, Temperature::zero(), 2.0) > 0.0);
}

TEST_CASE("size limits enforced") {
  CHECK_THROWS_AS(DenseSpinSystem::build(13, ModelParams{1.0, 0.5, 0.5}), TooLarge);
  CHECK_THROWS_AS(DenseSpinSystem::build(1, ModelParams{1.0, 0.5, 0.5}), TooLarge);
}

TEST_CASE("reduced matrices from oracle states assemble to PSD, trace-1 density matrices") {
  DenseSpinSystem sys0 = DenseSpinSystem::build(8, ModelParams{1.0, 0.8, 0.5});
  DenseSpinSystem sys1 = DenseSpinSystem::build(8, ModelParams{1.0, 0.8, 1.0});
  for (double T : {0.0, 0.3, 2.0}) {
    const Temperature temp = T == 0.0 ? Temperature::zero() : Temperature::of(T);
    const TwoSiteState s = ed::evolve_observables(sys0, sys1, temp, 1.1);
    const Eigen::Matrix4cd rho = assemble_rho(s);  // throws if not PSD within -1e-8
    CHECK(std::abs(rho.trace().real() - 1.0) < 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues()(0) > -1e-10);
  }
}
