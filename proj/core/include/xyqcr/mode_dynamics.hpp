#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "xyqcr/lattice_model.hpp"
#include "xyqcr/types.hpp"

namespace xyqcr {

/// Density matrix of one momentum block: 2x2 even-parity part in the basis
/// {|0>, c_p^dag c_{-p}^dag |0>} plus the two odd-sector populations.
struct ModeState {
  double phi = 0.0;
  Eigen::Matrix2cd even_block;
  std::array<double, 2> odd_pops{0.0, 0.0};

  void validate(double tol = 1e-12) const;
};

/// Gibbs state of one momentum block of H(h0) at temperature T, normalized
/// over all four levels. T = Zero returns the projector onto the block
/// ground state (always in the even sector for Lambda > 0).
ModeState thermal_block_state(double phi, const ModelParams& params_h0, Temperature T);

/// Conjugate the even block by exp(-i H1_even t); odd populations are untouched.
ModeState evolve_block(const ModeState& state, const ModelParams& params_h1, double t);

/// Read (n_p, kappa_p) = (<c_p^dag c_p>, <c_{-p} c_p>) off a block state.
struct ModeExpectations {
  double n_p = 0.0;
  cplx kappa_p{0.0, 0.0};
};
ModeExpectations mode_expectations(const ModeState& state);

/// Quadrature request: start at `nodes` Gauss-Legendre points and double until
/// two-site fields move by less than `tol`, capped at `cap` nodes.
struct GridSpec {
  int nodes = 2048;
  bool adaptive = true;
  int cap = 16384;
  double tol = 1e-10;
};

/// Per-mode coefficient tables for a sudden quench h0 -> h1 at temperature T.
/// After construction, evaluating the contractions at any time is O(#modes)
/// with no further matrix work: each mode contributes
///   x(t) = a + b cos(w t) + c sin(w t),  w = 2 J Lambda_1(phi).
class PreparedQuench {
 public:
  PreparedQuench(const QuenchProtocol& protocol, double gamma, Temperature T,
                 const MomentumGrid& grid);

  Contractions contractions_at(double t) const;
  TwoSiteState two_site_at(double t) const;

  /// Evaluate the two-site state on the uniform time grid t0 + k dt, k < count.
  /// Uses rotation recurrences per mode; output order is deterministic.
  std::vector<TwoSiteState> scan(double t0, double dt, int count) const;

  std::size_t mode_count() const { return omega_.size(); }

 private:
  Contractions from_sums(double sn, double sg, double skre, double skim) const;

  // quadrature weights folded with channel phase factors
  std::vector<double> w_n_, w_g_, w_k_;
  std::vector<double> omega_;
  // n_bar(t) = na + nb cos + nc sin   (includes the odd-sector populations)
  std::vector<double> na_, nb_, nc_;
  // Re kappa(t) and Im kappa(t), same harmonic structure
  std::vector<double> ra_, rb_, rc_;
  std::vector<double> ia_, ib_, ic_;
  double g1_imag_const_ = 0.0;  // time-independent, zero for thermal inputs
};

/// Build a PreparedQuench on a converged grid per `spec` (see GridSpec).
PreparedQuench prepare_quench(const QuenchProtocol& protocol, double gamma, Temperature T,
                              const GridSpec& spec);

/// Nearest-neighbor fermion contractions at time t after the sudden quench.
Contractions contractions(const QuenchProtocol& protocol, double gamma, Temperature T,
                          double t, const MomentumGrid& grid);

/// Time-evolved nearest-neighbor two-site state (mz and the four correlators).
/// Throws InvalidState if the assembled density matrix fails PSD within -1e-8.
TwoSiteState two_site_state(const QuenchProtocol& protocol, double gamma, Temperature T,
                            double t, const MomentumGrid& grid);

/// Wick assembly of the spin fields from the fermion contractions.
TwoSiteState wick_two_site(const Contractions& c);

/// Smallest eigenvalue of the assembled 4x4 density matrix, in closed form.
double two_site_min_eigenvalue(const TwoSiteState& s);

}  // namespace xyqcr
