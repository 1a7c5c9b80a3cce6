#pragma once

#include <Eigen/Dense>
#include <utility>

#include "xyqcr/types.hpp"

namespace xyqcr {

/// Dense exact diagonalization of the spin chain on N <= 12 sites with
/// periodic boundaries. Deliberately brute force: full 2^N x 2^N matrices,
/// direct LAPACK eigensolves, observables as raw Pauli expectation values.
class DenseSpinSystem {
 public:
  static DenseSpinSystem build(int N, const ModelParams& params);

  int sites() const { return n_sites_; }
  int dim() const { return 1 << n_sites_; }
  const ModelParams& params() const { return params_; }
  const Eigen::MatrixXd& hamiltonian() const { return h_; }

  /// Lowest eigenpair of the even JW-parity sector (cached). The spin chain's
  /// global ground state can sit in the odd sector at finite N for small h;
  /// the momentum-block construction lives in the even sector, so T = 0
  /// cross-checks pin this state. Computed from the parity-projected block.
  const std::pair<double, Eigen::VectorXd>& ground();

  /// Full spectral decomposition (LAPACK dsyevd, cached). eigen().first are the
  /// ascending eigenvalues, eigen().second the eigenvector columns.
  const std::pair<Eigen::VectorXd, Eigen::MatrixXd>& eigen();

 private:
  DenseSpinSystem() = default;
  int n_sites_ = 0;
  ModelParams params_;
  Eigen::MatrixXd h_;
  bool have_ground_ = false;
  bool have_eigen_ = false;
  std::pair<double, Eigen::VectorXd> ground_;
  std::pair<Eigen::VectorXd, Eigen::MatrixXd> eigen_;
};

namespace ed {

struct BondFields {
  double mz_a = 0.0, mz_b = 0.0;
  double cxx = 0.0, cyy = 0.0, czz = 0.0;
  double cxy = 0.0, cyx = 0.0;
  double imag_residual = 0.0;  // largest imaginary part met while projecting

  TwoSiteState to_two_site() const;
};

/// Pauli fields on bond (j, j+1 mod N) of a pure state.
BondFields bond_fields(const Eigen::VectorXcd& psi, int n_sites, int j);

struct ThermalObservables {
  TwoSiteState state;
  double energy_per_site = 0.0;
};

/// Gibbs-state bond (0,1) observables and energy per site.
ThermalObservables thermal_observables(DenseSpinSystem& sys, Temperature T);

/// Same, evaluated on bond (j, j+1); used by translation-invariance checks.
BondFields thermal_bond_fields(DenseSpinSystem& sys, Temperature T, int j);

/// Sudden-quench evolution rho(t) = e^{-i H1 t} rho0 e^{i H1 t}; bond (0,1) fields.
TwoSiteState evolve_observables(DenseSpinSystem& sys0, DenseSpinSystem& sys1, Temperature T,
                                double t);

/// Energy absorbed per site in a square pulse of duration tau.
double pulse_energy(DenseSpinSystem& sys0, DenseSpinSystem& sys1, Temperature T, double tau);

/// Energy per site of H1 in the evolved state; constant in t for a sanity check.
double evolved_energy(DenseSpinSystem& sys0, DenseSpinSystem& sys1, Temperature T, double t);

/// max |H[p(i),p(j)] - H[i,j]| with p the one-site translation (PBC check).
double translation_defect(const DenseSpinSystem& sys);

/// max |H[s,s']| over pairs with different global spin parity (Z2 check).
double parity_defect(const DenseSpinSystem& sys);

}  // namespace ed
}  // namespace xyqcr
