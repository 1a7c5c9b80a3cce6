#include "xyqcr/ed_oracle.hpp"

#include <bit>
#include <cmath>
#include <vector>

#include "xyqcr/errors.hpp"

extern "C" {
void dsyevd_(const char* jobz, const char* uplo, const int* n, double* a, const int* lda,
             double* w, double* work, const int* lwork, int* iwork, const int* liwork, int* info);
void dsyevr_(const char* jobz, const char* range, const char* uplo, const int* n, double* a,
             const int* lda, const double* vl, const double* vu, const int* il, const int* iu,
             const double* abstol, int* m, double* w, double* z, const int* ldz, int* isuppz,
             double* work, const int* lwork, int* iwork, const int* liwork, int* info);
}

namespace xyqcr {

namespace {

void lapack_full_sym(Eigen::MatrixXd a, Eigen::VectorXd& w, Eigen::MatrixXd& v) {
  const int n = static_cast<int>(a.rows());
  w.resize(n);
  int lwork = -1, liwork = -1, info = 0;
  double wq = 0.0;
  int iwq = 0;
  dsyevd_("V", "L", &n, a.data(), &n, w.data(), &wq, &lwork, &iwq, &liwork, &info);
  lwork = static_cast<int>(wq);
  liwork = iwq;
  std::vector<double> work(lwork);
  std::vector<int> iwork(liwork);
  dsyevd_("V", "L", &n, a.data(), &n, w.data(), work.data(), &lwork, iwork.data(), &liwork, &info);
  if (info != 0) throw NumericalAbort("dsyevd failed");
  v = std::move(a);  // eigenvectors overwrite the input
}

void lapack_lowest_sym(Eigen::MatrixXd a, double& e0, Eigen::VectorXd& v0) {
  const int n = static_cast<int>(a.rows());
  v0.resize(n);
  Eigen::VectorXd w(n);
  const int il = 1, iu = 1;
  int m = 0, lwork = -1, liwork = -1, info = 0;
  const double abstol = 0.0;
  double wq = 0.0;
  int iwq = 0;
  std::vector<int> isuppz(2);
  dsyevr_("V", "I", "L", &n, a.data(), &n, nullptr, nullptr, &il, &iu, &abstol, &m, w.data(),
          v0.data(), &n, isuppz.data(), &wq, &lwork, &iwq, &liwork, &info);
  lwork = static_cast<int>(wq);
  liwork = iwq;
  std::vector<double> work(lwork);
  std::vector<int> iwork(liwork);
  dsyevr_("V", "I", "L", &n, a.data(), &n, nullptr, nullptr, &il, &iu, &abstol, &m, w.data(),
          v0.data(), &n, isuppz.data(), work.data(), &lwork, iwork.data(), &liwork, &info);
  if (info != 0 || m != 1) throw NumericalAbort("dsyevr failed");
  e0 = w(0);
}

// Gibbs weights over the full spectrum; returns empty vector for T = Zero.
std::vector<double> gibbs_weights(const Eigen::VectorXd& evals, Temperature T) {
  if (T.is_zero()) return {};
  const double beta = 1.0 / T.value();
  const double e0 = evals(0);
  std::vector<double> w(evals.size());
  double z = 0.0;
  for (Eigen::Index k = 0; k < evals.size(); ++k) {
    w[k] = std::exp(-beta * (evals(k) - e0));
    z += w[k];
  }
  for (double& x : w) x /= z;
  return w;
}

}  // namespace

DenseSpinSystem DenseSpinSystem::build(int N, const ModelParams& params) {
  params.validate();
  if (N < 2 || N > 12) throw TooLarge("DenseSpinSystem: N must be in [2, 12]");

  DenseSpinSystem sys;
  sys.n_sites_ = N;
  sys.params_ = params;
  const int dim = 1 << N;
  sys.h_.setZero(dim, dim);

  const double J = params.J;
  const double field = 0.5 * params.h * J;       // (1/2) h sigma^z per site
  const double flip_eq = 0.5 * params.gamma * J; // pair channel, equal bits
  const double flip_ne = 0.5 * J;                // hopping channel, unequal bits

  for (int s = 0; s < dim; ++s) {
    sys.h_(s, s) += field * (2.0 * std::popcount(static_cast<unsigned>(s)) - N);
    for (int j = 0; j < N; ++j) {
      const int j2 = (j + 1) % N;
      const int mask = (1 << j) | (1 << j2);
      const bool b1 = (s >> j) & 1;
      const bool b2 = (s >> j2) & 1;
      sys.h_(s ^ mask, s) += (b1 == b2) ? flip_eq : flip_ne;
    }
  }
  return sys;
}

const std::pair<double, Eigen::VectorXd>& DenseSpinSystem::ground() {
  if (!have_ground_) {
    const int dim = 1 << n_sites_;
    std::vector<int> even_states;
    even_states.reserve(dim / 2);
    for (int s = 0; s < dim; ++s)
      if (!(std::popcount(static_cast<unsigned>(s)) & 1)) even_states.push_back(s);

    const int m = static_cast<int>(even_states.size());
    Eigen::MatrixXd he(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) he(i, j) = h_(even_states[i], even_states[j]);

    double e0 = 0.0;
    Eigen::VectorXd v0;
    lapack_lowest_sym(std::move(he), e0, v0);

    Eigen::VectorXd full = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i < m; ++i) full(even_states[i]) = v0(i);
    ground_ = {e0, std::move(full)};
    have_ground_ = true;
  }
  return ground_;
}

const std::pair<Eigen::VectorXd, Eigen::MatrixXd>& DenseSpinSystem::eigen() {
  if (!have_eigen_) {
    lapack_full_sym(h_, eigen_.first, eigen_.second);
    have_eigen_ = true;
  }
  return eigen_;
}

namespace ed {

TwoSiteState BondFields::to_two_site() const {
  TwoSiteState s;
  s.mz = 0.5 * (mz_a + mz_b);
  s.cxx = cxx;
  s.cyy = cyy;
  s.czz = czz;
  s.cxy = 0.5 * (cxy + cyx);
  return s;
}

BondFields bond_fields(const Eigen::VectorXcd& psi, int n_sites, int j) {
  const int dim = 1 << n_sites;
  const int j2 = (j + 1) % n_sites;
  const int bj = 1 << j;
  const int bj2 = 1 << j2;
  const int mask = bj | bj2;

  double mz_a = 0.0, mz_b = 0.0, czz = 0.0;
  cplx cxx{}, cyy{}, cxy{}, cyx{};
  for (int s = 0; s < dim; ++s) {
    const double pr = std::norm(psi(s));
    const double za = (s & bj) ? 1.0 : -1.0;
    const double zb = (s & bj2) ? 1.0 : -1.0;
    mz_a += pr * za;
    mz_b += pr * zb;
    czz += pr * za * zb;

    const cplx amp = std::conj(psi(s ^ mask)) * psi(s);
    const bool eq = ((s & bj) != 0) == ((s & bj2) != 0);
    cxx += amp;
    cyy += eq ? -amp : amp;
    // sigma^y flips the bit: |up> -> i |down>, |down> -> -i |up>
    const cplx ya = (s & bj) ? cplx(0, 1) : cplx(0, -1);
    const cplx yb = (s & bj2) ? cplx(0, 1) : cplx(0, -1);
    cxy += amp * yb;
    cyx += amp * ya;
  }

  BondFields out;
  out.mz_a = mz_a;
  out.mz_b = mz_b;
  out.czz = czz;
  out.cxx = cxx.real();
  out.cyy = cyy.real();
  out.cxy = cxy.real();
  out.cyx = cyx.real();
  out.imag_residual = std::max({std::abs(cxx.imag()), std::abs(cyy.imag()),
                                std::abs(cxy.imag()), std::abs(cyx.imag())});
  return out;
}

namespace {

BondFields weighted_bond_fields(DenseSpinSystem& sys, Temperature T, int j) {
  if (T.is_zero()) {
    const auto& [e0, v0] = sys.ground();
    return bond_fields(v0.cast<cplx>(), sys.sites(), j);
  }
  const auto& [evals, evecs] = sys.eigen();
  const std::vector<double> w = gibbs_weights(evals, T);
  BondFields acc;
  for (Eigen::Index k = 0; k < evals.size(); ++k) {
    if (w[k] < 1e-18) continue;
    const BondFields f = bond_fields(evecs.col(k).cast<cplx>(), sys.sites(), j);
    acc.mz_a += w[k] * f.mz_a;
    acc.mz_b += w[k] * f.mz_b;
    acc.cxx += w[k] * f.cxx;
    acc.cyy += w[k] * f.cyy;
    acc.czz += w[k] * f.czz;
    acc.cxy += w[k] * f.cxy;
    acc.cyx += w[k] * f.cyx;
    acc.imag_residual = std::max(acc.imag_residual, f.imag_residual);
  }
  return acc;
}

}  // namespace

ThermalObservables thermal_observables(DenseSpinSystem& sys, Temperature T) {
  ThermalObservables out;
  out.state = weighted_bond_fields(sys, T, 0).to_two_site();
  if (T.is_zero()) {
    out.energy_per_site = sys.ground().first / sys.sites();
  } else {
    const auto& evals = sys.eigen().first;
    const std::vector<double> w = gibbs_weights(evals, T);
    double e = 0.0;
    for (Eigen::Index k = 0; k < evals.size(); ++k) e += w[k] * evals(k);
    out.energy_per_site = e / sys.sites();
  }
  return out;
}

BondFields thermal_bond_fields(DenseSpinSystem& sys, Temperature T, int j) {
  return weighted_bond_fields(sys, T, j);
}

namespace {

Eigen::VectorXcd evolve_pure(DenseSpinSystem& sys1, const Eigen::VectorXd& psi0, double t) {
  const auto& [evals, evecs] = sys1.eigen();
  Eigen::VectorXd a = evecs.transpose() * psi0;
  Eigen::VectorXcd b(a.size());
  for (Eigen::Index k = 0; k < a.size(); ++k) b(k) = a(k) * std::polar(1.0, -evals(k) * t);
  Eigen::VectorXd re = evecs * b.real();
  Eigen::VectorXd im = evecs * b.imag();
  Eigen::VectorXcd psi(a.size());
  psi.real() = re;
  psi.imag() = im;
  return psi;
}

// Dense finite-T evolution. Memory-heavy at N = 12; intended for N <= 10.
Eigen::MatrixXcd evolve_thermal_dense(DenseSpinSystem& sys0, DenseSpinSystem& sys1, Temperature T,
                                      double t) {
  const auto& [evals0, evecs0] = sys0.eigen();
  const std::vector<double> w = gibbs_weights(evals0, T);
  Eigen::MatrixXd rho0 =
      evecs0 * Eigen::Map<const Eigen::VectorXd>(w.data(), w.size()).asDiagonal() *
      evecs0.transpose();
  const auto& [evals1, evecs1] = sys1.eigen();
  Eigen::MatrixXd rt = evecs1.transpose() * rho0 * evecs1;
  Eigen::MatrixXcd m(rt.rows(), rt.cols());
  for (Eigen::Index k = 0; k < rt.rows(); ++k)
    for (Eigen::Index l = 0; l < rt.cols(); ++l)
      m(k, l) = rt(k, l) * std::polar(1.0, -(evals1(k) - evals1(l)) * t);
  return evecs1.cast<cplx>() * m * evecs1.transpose().cast<cplx>();
}

BondFields bond_fields_from_rho(const Eigen::MatrixXcd& rho, int n_sites, int j) {
  // reduce onto bond (j, j+1), then project on Pauli products
  const int dim = 1 << n_sites;
  const int j2 = (j + 1) % n_sites;
  Eigen::Matrix4cd rab = Eigen::Matrix4cd::Zero();
  for (int s = 0; s < dim; ++s) {
    const int a = (((s >> j) & 1)) | (((s >> j2) & 1) << 1);
    for (int bpair = 0; bpair < 4; ++bpair) {
      int sp = s & ~((1 << j) | (1 << j2));
      sp |= (bpair & 1) << j;
      sp |= ((bpair >> 1) & 1) << j2;
      rab(a, bpair) += rho(s, sp);
    }
  }
  // basis index a = bit_j + 2 bit_j2; bit set <=> sigma^z = +1
  auto pauli = [](int which) -> Eigen::Matrix2cd {
    Eigen::Matrix2cd m;
    switch (which) {
      case 1: m << 0, 1, 1, 0; break;                          // x (basis {-,+})
      case 2: m << 0, cplx(0, 1), cplx(0, -1), 0; break;       // y
      case 3: m << -1, 0, 0, 1; break;                         // z
      default: m.setIdentity(); break;
    }
    return m;
  };
  auto expect = [&](int oa, int ob) {
    const Eigen::Matrix2cd ma = pauli(oa);
    const Eigen::Matrix2cd mb = pauli(ob);
    cplx acc = 0.0;
    for (int a1 = 0; a1 < 2; ++a1)
      for (int b1 = 0; b1 < 2; ++b1)
        for (int a2 = 0; a2 < 2; ++a2)
          for (int b2 = 0; b2 < 2; ++b2)
            acc += rab(a1 + 2 * b1, a2 + 2 * b2) * ma(a2, a1) * mb(b2, b1);
    return acc;
  };

  BondFields out;
  auto take = [&](int oa, int ob) {
    const cplx v = expect(oa, ob);
    out.imag_residual = std::max(out.imag_residual, std::abs(v.imag()));
    return v.real();
  };
  out.mz_a = take(3, 0);
  out.mz_b = take(0, 3);
  out.cxx = take(1, 1);
  out.cyy = take(2, 2);
  out.czz = take(3, 3);
  out.cxy = take(1, 2);
  out.cyx = take(2, 1);
  return out;
}

}  // namespace

TwoSiteState evolve_observables(DenseSpinSystem& sys0, DenseSpinSystem& sys1, Temperature T,
                                double t) {
  if (sys0.sites() != sys1.sites())
    throw ConfigError("evolve_observables: systems must have the same N");
  if (T.is_zero()) {
    const Eigen::VectorXcd psi = evolve_pure(sys1, sys0.ground().second, t);
    return bond_fields(psi, sys0.sites(), 0).to_two_site();
  }
  const Eigen::MatrixXcd rho = evolve_thermal_dense(sys0, sys1, T, t);
  return bond_fields_from_rho(rho, sys0.sites(), 0).to_two_site();
}

double pulse_energy(DenseSpinSystem& sys0, DenseSpinSystem& sys1, Temperature T, double tau) {
  if (sys0.sites() != sys1.sites()) throw ConfigError("pulse_energy: systems must have the same N");
  const int n_sites = sys0.sites();
  if (T.is_zero()) {
    const auto& [e0, v0] = sys0.ground();
    const Eigen::VectorXcd psi = evolve_pure(sys1, v0, tau);
    const Eigen::VectorXd hre = sys0.hamiltonian() * psi.real().eval();
    const Eigen::VectorXd him = sys0.hamiltonian() * psi.imag().eval();
    const double e_tau = psi.real().dot(hre) + psi.imag().dot(him);
    return (e_tau - e0) / n_sites;
  }
  // finite T: phases applied in the H1 eigenbasis, O(dim^2) per tau
  const auto& [evals0, evecs0] = sys0.eigen();
  const std::vector<double> w = gibbs_weights(evals0, T);
  Eigen::MatrixXd rho0 =
      evecs0 * Eigen::Map<const Eigen::VectorXd>(w.data(), w.size()).asDiagonal() *
      evecs0.transpose();
  const auto& [evals1, evecs1] = sys1.eigen();
  const Eigen::MatrixXd rt = evecs1.transpose() * rho0 * evecs1;
  const Eigen::MatrixXd ht = evecs1.transpose() * sys0.hamiltonian() * evecs1;
  double acc = 0.0;
  for (Eigen::Index k = 0; k < rt.rows(); ++k)
    for (Eigen::Index l = 0; l < rt.cols(); ++l)
      acc += ht(k, l) * rt(k, l) * (std::cos((evals1(k) - evals1(l)) * tau) - 1.0);
  return acc / n_sites;
}

double evolved_energy(DenseSpinSystem& sys0, DenseSpinSystem& sys1, Temperature T, double t) {
  if (T.is_zero()) {
    const Eigen::VectorXcd psi = evolve_pure(sys1, sys0.ground().second, t);
    const Eigen::VectorXd hre = sys1.hamiltonian() * psi.real().eval();
    const Eigen::VectorXd him = sys1.hamiltonian() * psi.imag().eval();
    return (psi.real().dot(hre) + psi.imag().dot(him)) / sys0.sites();
  }
  const Eigen::MatrixXcd rho = evolve_thermal_dense(sys0, sys1, T, t);
  return (sys1.hamiltonian().cast<cplx>() * rho).trace().real() / sys0.sites();
}

double translation_defect(const DenseSpinSystem& sys) {
  const int n_sites = sys.sites();
  const int dim = 1 << n_sites;
  const int high = 1 << (n_sites - 1);
  auto rot = [&](int s) { return ((s << 1) & (dim - 1)) | ((s & high) ? 1 : 0); };
  double defect = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      defect = std::max(defect, std::abs(sys.hamiltonian()(rot(i), rot(j)) - sys.hamiltonian()(i, j)));
  return defect;
}

double parity_defect(const DenseSpinSystem& sys) {
  const int dim = sys.dim();
  double defect = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      if ((std::popcount(static_cast<unsigned>(i)) & 1) !=
          (std::popcount(static_cast<unsigned>(j)) & 1))
        defect = std::max(defect, std::abs(sys.hamiltonian()(i, j)));
  return defect;
}

}  // namespace ed
}  // namespace xyqcr
