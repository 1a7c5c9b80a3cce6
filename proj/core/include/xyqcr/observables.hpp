#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "xyqcr/lattice_model.hpp"
#include "xyqcr/mode_dynamics.hpp"
#include "xyqcr/types.hpp"

namespace xyqcr {

/// Pauli-product expansion of the nearest-neighbor state as a 4x4 matrix.
/// Hermitian and trace-1 by construction; throws NotPositive if the smallest
/// eigenvalue is below -1e-8.
Eigen::Matrix4cd assemble_rho(const TwoSiteState& s);

/// Entanglement negativity from the closed form in the locally rotated frame
/// (the in-plane rotation that diagonalizes the {x,y} correlation block).
/// Result in [0, 1/2].
double negativity(const TwoSiteState& s);

/// Independent route: eigenvalues of the partial transpose of assemble_rho(s).
double negativity_partial_transpose(const TwoSiteState& s);

/// log2(2 N + 1), in [0, 1].
double log_negativity(const TwoSiteState& s);

/// Mutual information I = 2 H(rho_A) - H(rho_AB), base-2 entropies, in [0, 2].
/// Primary path: numerically exact eigendecomposition of assemble_rho(s).
double mutual_information(const TwoSiteState& s);

/// Cross-check route: the closed-form spectra evaluated in the rotated frame.
double mutual_information_closed_form(const TwoSiteState& s);

/// Shannon entropy (base 2) of a probability vector; 0 log 0 == 0.
/// Eigenvalues in [-1e-10, 0) are clipped to zero; more negative throws NotPositive.
double entropy_bits(const std::vector<double>& p);

struct EnergyResponse {
  double T = 0.0;        // k_B T / J (0 encodes the T = Zero limit)
  double tau = 0.0;      // pulse duration, hbar/J
  double delta_e = 0.0;  // absorbed energy per site, units of J
};

/// Per-mode coefficient tables for the pulse-absorbed energy: each mode
/// contributes b (cos(w tau) - 1) + c sin(w tau), which makes dE(0) = 0 exact.
class PreparedPulse {
 public:
  PreparedPulse(const QuenchProtocol& protocol, double gamma, Temperature T,
                const MomentumGrid& grid);

  double delta_e_at(double tau) const;
  std::vector<double> scan(double tau0, double dtau, int count) const;

 private:
  std::vector<double> omega_, b_, c_;  // quadrature weights folded into b, c
};

/// Build a PreparedPulse on a converged grid per `spec`.
PreparedPulse prepare_pulse(const QuenchProtocol& protocol, double gamma, Temperature T,
                            const GridSpec& spec);

/// Energy absorbed during the square pulse of duration protocol.pulse_duration.
EnergyResponse energy_absorbed(const QuenchProtocol& protocol, double gamma, Temperature T,
                               const MomentumGrid& grid);

}  // namespace xyqcr
