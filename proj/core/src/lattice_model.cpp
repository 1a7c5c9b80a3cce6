#include "xyqcr/lattice_model.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "xyqcr/errors.hpp"

namespace xyqcr {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kDegenerateTol = 1e-12;
}  // namespace

double dispersion(double phi, double h, double gamma) {
  const double a = std::cos(phi) + h;
  const double b = gamma * std::sin(phi);
  return std::hypot(a, b);
}

BlockHamiltonian block_hamiltonian(double phi, const ModelParams& params) {
  params.validate();
  const double J = params.J;
  const double s = std::sin(phi);
  const double c = std::cos(phi);

  BlockHamiltonian out;
  out.phi = phi;
  Eigen::Matrix4cd& m = out.matrix;
  m.setZero();
  m(0, 0) = -params.h * J;
  m(0, 1) = cplx(0.0, params.gamma * s * J);
  m(1, 0) = cplx(0.0, -params.gamma * s * J);
  m(1, 1) = (params.h + 2.0 * c) * J;
  m(2, 2) = c * J;
  m(3, 3) = c * J;
  out.even_block = m.topLeftCorner<2, 2>();
  return out;
}

Eigen::Matrix2cd bogoliubov_unitary(double phi, double h, double gamma) {
  const double lam = dispersion(phi, h, gamma);
  if (lam < kDegenerateTol) throw DegenerateBlock("bogoliubov_unitary: Lambda < 1e-12 (gap closing)");

  const double alpha = h + std::cos(phi);
  const double g = gamma * std::sin(phi);
  // Evaluate Lambda -+ alpha without cancellation: the smaller of the two is g^2/(Lambda + |alpha|).
  double lp, lm;  // Lambda + alpha, Lambda - alpha
  if (alpha >= 0.0) {
    lp = lam + alpha;
    lm = g * g / lp;
  } else {
    lm = lam - alpha;
    lp = g * g / lm;
  }
  const double norm = 1.0 / std::sqrt(2.0 * lam);
  Eigen::Matrix2cd u;
  u(0, 0) = cplx(0.0, norm * std::sqrt(lp));
  u(0, 1) = cplx(0.0, norm * std::sqrt(lm));
  u(1, 0) = cplx(-norm * std::sqrt(lm), 0.0);
  u(1, 1) = cplx(norm * std::sqrt(lp), 0.0);
  return u;
}

MomentumGrid make_grid(int n) {
  if (n < 2) throw ConfigError("make_grid: need n >= 2");

  // Gauss-Legendre on (-1, 1) by Newton iteration on P_n, then map to (0, pi).
  MomentumGrid grid;
  grid.nodes.resize(n);
  grid.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) {
        // one polishing step after convergence
        p0 = 1.0;
        p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        pp = n * (x * p1 - p0) / (x * x - 1.0);
        break;
      }
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    // x in descending order from cos; store ascending in phi
    grid.nodes[i] = 0.5 * kPi * (1.0 - x);
    grid.weights[i] = 0.5 * kPi * w;
    grid.nodes[n - 1 - i] = 0.5 * kPi * (1.0 + x);
    grid.weights[n - 1 - i] = 0.5 * kPi * w;
  }
  return grid;
}

MomentumGrid antiperiodic_grid(int N) {
  if (N < 2 || N % 2 != 0) throw ConfigError("antiperiodic_grid: need even N >= 2");
  MomentumGrid grid;
  const int m = N / 2;
  grid.nodes.resize(m);
  grid.weights.resize(m);
  for (int k = 0; k < m; ++k) {
    grid.nodes[k] = (2.0 * k + 1.0) * kPi / N;
    grid.weights[k] = 2.0 * kPi / N;
  }
  return grid;
}

const MomentumGrid& pooled_grid(int n) {
  static std::mutex mtx;
  static std::map<int, MomentumGrid> pool;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = pool.find(n);
  if (it == pool.end()) it = pool.emplace(n, make_grid(n)).first;
  return it->second;
}

}  // namespace xyqcr
