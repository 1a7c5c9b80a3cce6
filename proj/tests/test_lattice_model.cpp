#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "xyqcr/errors.hpp"
#include "xyqcr/lattice_model.hpp"

using namespace xyqcr;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("dispersion: closed-form spot values") {
  CHECK(dispersion(0.0, 1.0, 0.8) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(dispersion(kPi, 1.0, 0.8) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(dispersion(kPi / 2, 0.0, 0.8) == doctest::Approx(0.8).epsilon(1e-14));
}

TEST_CASE("dispersion: symmetry properties") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> uphi(0.0, kPi), uh(-2.0, 2.0), ug(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double phi = uphi(rng), h = uh(rng), g = ug(rng);
    CHECK(dispersion(phi, h, g) == doctest::Approx(dispersion(phi, h, -g)).epsilon(1e-14));
    CHECK(dispersion(kPi - phi, -h, g) == doctest::Approx(dispersion(phi, h, g)).epsilon(1e-14));
    CHECK(dispersion(phi, h, g) >= 0.0);
  }
}

TEST_CASE("block_hamiltonian: structure and spectrum") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> uphi(0.01, kPi - 0.01), uh(-1.8, 1.8), ug(0.05, 1.0);

  for (int i = 0; i < 50; ++i) {
    const ModelParams p{1.0, ug(rng), uh(rng)};
    const double phi = uphi(rng);
    const BlockHamiltonian b = block_hamiltonian(phi, p);
    const double c = std::cos(phi);
    const double lam = dispersion(phi, p.h, p.gamma);

    // Hermitian within 1e-14, odd block cos(phi) * I
    CHECK((b.matrix - b.matrix.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(std::abs(b.matrix(2, 2).real() - c) < 1e-14);
    CHECK(std::abs(b.matrix(3, 3).real() - c) < 1e-14);
    CHECK(std::abs(b.matrix(2, 3)) < 1e-15);

    // eigenvalue set {cos +- Lambda, cos, cos}
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(b.matrix, Eigen::EigenvaluesOnly);
    Eigen::Vector4d expected(c - lam, c, c, c + lam);
    std::sort(expected.data(), expected.data() + 4);
    for (int k = 0; k < 4; ++k) CHECK(std::abs(es.eigenvalues()(k) - expected(k)) < 1e-12);

    // trace identity
    CHECK(b.matrix.trace().real() == doctest::Approx(4.0 * c).epsilon(1e-13));
  }

  SUBCASE("phi = pi/2 even block") {
    const ModelParams p{1.0, 0.8, 0.37};
    const BlockHamiltonian b = block_hamiltonian(kPi / 2, p);
    CHECK(std::abs(b.even_block(0, 0) - cplx(-0.37, 0.0)) < 1e-14);
    CHECK(std::abs(b.even_block(0, 1) - cplx(0.0, 0.8)) < 1e-14);
    CHECK(std::abs(b.even_block(1, 0) - cplx(0.0, -0.8)) < 1e-14);
    CHECK(std::abs(b.even_block(1, 1) - cplx(0.37, 0.0)) < 1e-14);
  }
}

TEST_CASE("bogoliubov_unitary: unitarity and diagonalization vs generic eigensolver") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> uphi(0.001, kPi - 0.001), uh(-1.9, 1.9), ug(0.02, 1.0);

  for (int i = 0; i < 100; ++i) {
    const double phi = uphi(rng), h = uh(rng), g = ug(rng);
    const double lam = dispersion(phi, h, g);
    if (lam < 1e-6) continue;
    const Eigen::Matrix2cd u = bogoliubov_unitary(phi, h, g);

    CHECK((u * u.adjoint() - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() < 1e-12);

    const ModelParams p{1.0, g, h};
    const Eigen::Matrix2cd he = block_hamiltonian(phi, p).even_block;
    const Eigen::Matrix2cd d = u.adjoint() * he * u;
    const double c = std::cos(phi);
    CHECK(std::abs(d(0, 0) - cplx(c - lam, 0)) < 1e-12);
    CHECK(std::abs(d(1, 1) - cplx(c + lam, 0)) < 1e-12);
    CHECK(std::abs(d(0, 1)) < 1e-12);

    // columns are eigenvectors: residual check against the eigenvalues
    CHECK(((he - (c - lam) * Eigen::Matrix2cd::Identity()) * u.col(0)).norm() < 1e-10);
    CHECK(((he - (c + lam) * Eigen::Matrix2cd::Identity()) * u.col(1)).norm() < 1e-10);
  }

  SUBCASE("already-diagonal block: gamma sin(phi) = 0, alpha > 0") {
    const Eigen::Matrix2cd u = bogoliubov_unitary(kPi / 3, 0.9, 0.0);
    CHECK(std::abs(u(0, 1)) < 1e-12);
    CHECK(std::abs(u(1, 0)) < 1e-12);
    CHECK(std::abs(std::abs(u(0, 0)) - 1.0) < 1e-12);
    CHECK(std::abs(std::abs(u(1, 1)) - 1.0) < 1e-12);
  }

  SUBCASE("degenerate block throws") {
    CHECK_THROWS_AS(bogoliubov_unitary(kPi, 1.0, 0.8), DegenerateBlock);
  }
}

TEST_CASE("make_grid: quadrature contract") {
  const MomentumGrid g = make_grid(64);
  REQUIRE(g.size() == 64);

  double wsum = 0.0;
  for (double w : g.weights) {
    CHECK(w > 0.0);
    wsum += w;
  }
  CHECK(std::abs(wsum - kPi) < 1e-12);

  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(g.nodes[i] > 0.0);
    CHECK(g.nodes[i] < kPi);
    if (i) CHECK(g.nodes[i] > g.nodes[i - 1]);
  }

  CHECK(std::abs(g.integrate([](double phi) { return std::sin(phi); }) - 2.0) < 1e-12);
  CHECK(std::abs(g.integrate([](double phi) { return std::cos(phi); })) < 1e-12);

  SUBCASE("convergence of the dispersion integral under doubling") {
    auto f = [](double phi) { return dispersion(phi, 0.5, 0.8); };
    const double i64 = make_grid(64).integrate(f);
    const double i128 = make_grid(128).integrate(f);
    CHECK(std::abs(i64 - i128) < 1e-10);
  }

  SUBCASE("n < 2 rejected") { CHECK_THROWS_AS(make_grid(1), ConfigError); }
}

TEST_CASE("make_grid: high-order rule stays exact") {
  // Gauss-Legendre with n nodes integrates polynomials of degree 2n-1 exactly;
  // in phi variables check a smooth oscillatory integrand against refinement.
  auto f = [](double phi) { return std::cos(3.0 * phi) * std::exp(std::sin(phi)); };
  const double a = make_grid(48).integrate(f);
  const double b = make_grid(96).integrate(f);
  CHECK(std::abs(a - b) < 1e-13);
}

TEST_CASE("antiperiodic_grid: discrete momenta of the even sector") {
  const MomentumGrid g = antiperiodic_grid(12);
  REQUIRE(g.size() == 6);
  for (int k = 0; k < 6; ++k) {
    CHECK(g.nodes[k] == doctest::Approx((2.0 * k + 1.0) * kPi / 12).epsilon(1e-15));
    CHECK(g.weights[k] == doctest::Approx(2.0 * kPi / 12).epsilon(1e-15));
  }
  double wsum = 0.0;
  for (double w : g.weights) wsum += w;
  CHECK(std::abs(wsum - kPi) < 1e-12);

  CHECK_THROWS_AS(antiperiodic_grid(7), ConfigError);
}

TEST_CASE("pooled_grid returns the same object for equal n") {
  const MomentumGrid& a = pooled_grid(128);
  const MomentumGrid& b = pooled_grid(128);
  CHECK(&a == &b);
}
