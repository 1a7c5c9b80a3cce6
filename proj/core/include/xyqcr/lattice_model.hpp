#pragma once

#include <Eigen/Dense>
#include <vector>

#include "xyqcr/types.hpp"

namespace xyqcr {

/// Quadrature over momentum angle phi in (0, pi). Weights sum to pi.
struct MomentumGrid {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }

  /// Integrate f(phi) over (0, pi) with the stored weights.
  template <class F>
  double integrate(F&& f) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
    return acc;
  }
};

/// One momentum block of the fermionized Hamiltonian in the basis
/// {|0>, c_p^dag c_{-p}^dag |0>, c_p^dag |0>, c_{-p}^dag |0>}.
struct BlockHamiltonian {
  double phi = 0.0;
  Eigen::Matrix4cd matrix;      // units of J
  Eigen::Matrix2cd even_block;  // upper-left 2x2 (even-parity sector)
};

/// Quasiparticle energy Lambda = sqrt((cos phi + h)^2 + gamma^2 sin^2 phi), units of J.
double dispersion(double phi, double h, double gamma);

/// Assemble the 4x4 momentum-block Hamiltonian for one phi.
BlockHamiltonian block_hamiltonian(double phi, const ModelParams& params);

/// 2x2 unitary diagonalizing the even block, lower eigenvalue J(cos phi - Lambda) first.
/// Throws DegenerateBlock when Lambda < 1e-12.
Eigen::Matrix2cd bogoliubov_unitary(double phi, double h, double gamma);

/// Gauss-Legendre nodes/weights mapped to (0, pi). n >= 2.
MomentumGrid make_grid(int n);

/// Discrete antiperiodic momenta phi_k = (2k+1) pi / N, k = 0..N/2-1, with
/// uniform weights 2 pi / N. Matches the even-parity sector of an N-site chain.
MomentumGrid antiperiodic_grid(int N);

/// Process-wide cache of Gauss-Legendre grids keyed by node count.
const MomentumGrid& pooled_grid(int n);

}  // namespace xyqcr
