#include "xyqcr/mode_dynamics.hpp"

#include <cmath>
#include <numbers>

#include "xyqcr/errors.hpp"

namespace xyqcr {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kPsdAbort = -1e-8;

struct BlockThermalWeights {
  double d_ground = 1.0;  // weight of even ground level
  double d_excited = 0.0; // weight of even excited level
  double d_odd = 0.0;     // weight of each odd level
};

// Gibbs weights of the four block levels {cos-L, cos+L, cos, cos} (units of J),
// exponentials shifted by the block minimum cos - L.
BlockThermalWeights block_weights(double lambda, Temperature T) {
  BlockThermalWeights w;
  if (T.is_zero()) return w;
  const double beta = 1.0 / T.value();
  const double qo = std::exp(-lambda * beta);
  const double z = (1.0 + qo) * (1.0 + qo);
  w.d_ground = 1.0 / z;
  w.d_excited = qo * qo / z;
  w.d_odd = qo / z;
  return w;
}
}  // namespace

void ModeState::validate(double tol) const {
  const double tr = even_block.trace().real() + odd_pops[0] + odd_pops[1];
  if (std::abs(tr - 1.0) > tol) throw InvalidState("ModeState: trace != 1");
  if (odd_pops[0] < -tol || odd_pops[0] > 1.0 + tol || odd_pops[1] < -tol || odd_pops[1] > 1.0 + tol)
    throw InvalidState("ModeState: odd populations outside [0,1]");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(even_block, Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) < -tol) throw InvalidState("ModeState: even block not PSD");
}

ModeState thermal_block_state(double phi, const ModelParams& params_h0, Temperature T) {
  params_h0.validate();
  const double lambda = dispersion(phi, params_h0.h, params_h0.gamma);
  const Eigen::Matrix2cd u = bogoliubov_unitary(phi, params_h0.h, params_h0.gamma);
  const BlockThermalWeights w = block_weights(lambda, T);

  ModeState out;
  out.phi = phi;
  out.even_block = w.d_ground * (u.col(0) * u.col(0).adjoint()) +
                   w.d_excited * (u.col(1) * u.col(1).adjoint());
  out.odd_pops = {w.d_odd, w.d_odd};
  return out;
}

ModeState evolve_block(const ModeState& state, const ModelParams& params_h1, double t) {
  if (!(t >= 0.0)) throw ConfigError("evolve_block: t must be >= 0");
  const double lambda = dispersion(state.phi, params_h1.h, params_h1.gamma);
  const Eigen::Matrix2cd u = bogoliubov_unitary(state.phi, params_h1.h, params_h1.gamma);

  // In the H1 eigenbasis only the off-diagonal picks up a phase; the common
  // exp(-i J cos(phi) t) cancels in the conjugation.
  Eigen::Matrix2cd rt = u.adjoint() * state.even_block * u;
  const double omega = 2.0 * params_h1.J * lambda;
  const cplx phase = std::polar(1.0, omega * t);
  rt(0, 1) *= phase;
  rt(1, 0) = std::conj(rt(0, 1));

  ModeState out;
  out.phi = state.phi;
  out.even_block = u * rt * u.adjoint();
  out.odd_pops = state.odd_pops;
  return out;
}

ModeExpectations mode_expectations(const ModeState& state) {
  ModeExpectations out;
  out.n_p = state.even_block(1, 1).real() + state.odd_pops[0];
  out.kappa_p = state.even_block(1, 0);
  return out;
}

PreparedQuench::PreparedQuench(const QuenchProtocol& protocol, double gamma, Temperature T,
                               const MomentumGrid& grid) {
  protocol.validate();
  const std::size_t n = grid.size();
  w_n_.resize(n); w_g_.resize(n); w_k_.resize(n);
  omega_.resize(n);
  na_.resize(n); nb_.resize(n); nc_.resize(n);
  ra_.resize(n); rb_.resize(n); rc_.resize(n);
  ia_.resize(n); ib_.resize(n); ic_.resize(n);

  const ModelParams p0{1.0, gamma, protocol.h0};
  const ModelParams p1{1.0, gamma, protocol.h1};

  for (std::size_t m = 0; m < n; ++m) {
    const double phi = grid.nodes[m];
    const double w = grid.weights[m] / kPi;
    w_n_[m] = w;
    w_g_[m] = w * std::cos(phi);
    w_k_[m] = w * std::sin(phi);

    const ModeState rho0 = thermal_block_state(phi, p0, T);
    const double lambda1 = dispersion(phi, p1.h, gamma);
    const Eigen::Matrix2cd u1 = bogoliubov_unitary(phi, p1.h, gamma);
    omega_[m] = 2.0 * lambda1;

    const Eigen::Matrix2cd rt = u1.adjoint() * rho0.even_block * u1;
    const double d0 = rt(0, 0).real();
    const double d1 = rt(1, 1).real();
    const cplx o = rt(0, 1);  // evolves as o * exp(i omega t)

    const double odd_mean = 0.5 * (rho0.odd_pops[0] + rho0.odd_pops[1]);

    // n(t) = |u1(1,0)|^2 d0 + |u1(1,1)|^2 d1 + 2 Re[u1(1,0) conj(u1(1,1)) o e^{i w t}]
    const cplx zn = u1(1, 0) * std::conj(u1(1, 1)) * o;
    na_[m] = std::norm(u1(1, 0)) * d0 + std::norm(u1(1, 1)) * d1 + odd_mean;
    nb_[m] = 2.0 * zn.real();
    nc_[m] = -2.0 * zn.imag();

    // kappa(t) = kc + P e^{i w t} + Q e^{-i w t}
    const cplx kc = u1(1, 0) * std::conj(u1(0, 0)) * d0 + u1(1, 1) * std::conj(u1(0, 1)) * d1;
    const cplx P = u1(1, 0) * std::conj(u1(0, 1)) * o;
    const cplx Q = u1(1, 1) * std::conj(u1(0, 0)) * std::conj(o);
    ra_[m] = kc.real();
    rb_[m] = P.real() + Q.real();
    rc_[m] = -P.imag() + Q.imag();
    ia_[m] = kc.imag();
    ib_[m] = P.imag() + Q.imag();
    ic_[m] = P.real() - Q.real();

    g1_imag_const_ += -w * std::sin(phi) * 0.5 * (rho0.odd_pops[0] - rho0.odd_pops[1]);
  }
}

Contractions PreparedQuench::from_sums(double sn, double sg, double skre, double skim) const {
  Contractions c;
  c.n0 = sn;
  c.g1 = cplx(sg, g1_imag_const_);
  c.k1 = cplx(skre, skim);
  return c;
}

Contractions PreparedQuench::contractions_at(double t) const {
  double sn = 0.0, sg = 0.0, skre = 0.0, skim = 0.0;
  const std::size_t n = omega_.size();
  for (std::size_t m = 0; m < n; ++m) {
    const double c = std::cos(omega_[m] * t);
    const double s = std::sin(omega_[m] * t);
    const double nbar = na_[m] + nb_[m] * c + nc_[m] * s;
    const double kre = ra_[m] + rb_[m] * c + rc_[m] * s;
    const double kim = ia_[m] + ib_[m] * c + ic_[m] * s;
    sn += w_n_[m] * nbar;
    sg += w_g_[m] * nbar;
    skre += w_k_[m] * kim;   // Re k1 = (1/pi) Int sin(phi) Im kappa
    skim -= w_k_[m] * kre;   // Im k1 = -(1/pi) Int sin(phi) Re kappa
  }
  return from_sums(sn, sg, skre, skim);
}

TwoSiteState wick_two_site(const Contractions& c) {
  TwoSiteState s;
  const double g = c.g1.real();
  s.mz = 2.0 * c.n0 - 1.0;
  s.cxx = 2.0 * (g - c.k1.real());
  s.cyy = 2.0 * (g + c.k1.real());
  s.cxy = 2.0 * c.k1.imag();
  s.czz = s.mz * s.mz + 4.0 * std::norm(c.k1) - 4.0 * g * g;
  return s;
}

double two_site_min_eigenvalue(const TwoSiteState& s) {
  // X-structure: two 2x2 blocks diagonalize in closed form.
  const double inner = 0.25 * (1.0 - s.czz - std::abs(s.cxx + s.cyy));
  const double outer =
      0.25 * (1.0 + s.czz -
              std::sqrt(4.0 * s.mz * s.mz + (s.cxx - s.cyy) * (s.cxx - s.cyy) + 4.0 * s.cxy * s.cxy));
  return std::min(inner, outer);
}

TwoSiteState PreparedQuench::two_site_at(double t) const {
  const TwoSiteState s = wick_two_site(contractions_at(t));
  if (two_site_min_eigenvalue(s) < kPsdAbort)
    throw InvalidState("two_site_state: assembled density matrix not PSD (convention error)");
  return s;
}

std::vector<TwoSiteState> PreparedQuench::scan(double t0, double dt, int count) const {
  const std::size_t n = omega_.size();
  std::vector<double> cs(n), sn(n), dc(n), ds(n);
  for (std::size_t m = 0; m < n; ++m) {
    cs[m] = std::cos(omega_[m] * t0);
    sn[m] = std::sin(omega_[m] * t0);
    dc[m] = std::cos(omega_[m] * dt);
    ds[m] = std::sin(omega_[m] * dt);
  }

  std::vector<TwoSiteState> out;
  out.reserve(count);
  double worst_min_eig = 0.0;
  for (int k = 0; k < count; ++k) {
    double acc_n = 0.0, acc_g = 0.0, acc_kre = 0.0, acc_kim = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      const double c = cs[m];
      const double s = sn[m];
      const double nbar = na_[m] + nb_[m] * c + nc_[m] * s;
      const double kre = ra_[m] + rb_[m] * c + rc_[m] * s;
      const double kim = ia_[m] + ib_[m] * c + ic_[m] * s;
      acc_n += w_n_[m] * nbar;
      acc_g += w_g_[m] * nbar;
      acc_kre += w_k_[m] * kim;
      acc_kim -= w_k_[m] * kre;
      cs[m] = c * dc[m] - s * ds[m];
      sn[m] = s * dc[m] + c * ds[m];
    }
    const TwoSiteState s = wick_two_site(from_sums(acc_n, acc_g, acc_kre, acc_kim));
    worst_min_eig = std::min(worst_min_eig, two_site_min_eigenvalue(s));
    out.push_back(s);
  }
  if (worst_min_eig < kPsdAbort)
    throw InvalidState("two_site scan: assembled density matrix not PSD (convention error)");
  return out;
}

namespace {
double field_distance(const TwoSiteState& a, const TwoSiteState& b) {
  double d = std::abs(a.mz - b.mz);
  d = std::max(d, std::abs(a.cxx - b.cxx));
  d = std::max(d, std::abs(a.cyy - b.cyy));
  d = std::max(d, std::abs(a.czz - b.czz));
  d = std::max(d, std::abs(a.cxy - b.cxy));
  return d;
}
}  // namespace

PreparedQuench prepare_quench(const QuenchProtocol& protocol, double gamma, Temperature T,
                              const GridSpec& spec) {
  int n = spec.nodes;
  PreparedQuench pq(protocol, gamma, T, pooled_grid(n));
  if (!spec.adaptive) return pq;

  // probe times chosen away from any special structure of the protocol
  constexpr double probes[] = {0.0, 0.73, 2.9, 7.7};
  while (n < spec.cap) {
    PreparedQuench finer(protocol, gamma, T, pooled_grid(2 * n));
    double diff = 0.0;
    for (double t : probes)
      diff = std::max(diff, field_distance(pq.two_site_at(t), finer.two_site_at(t)));
    if (diff < spec.tol) return pq;
    n *= 2;
    pq = std::move(finer);
  }
  return pq;
}

Contractions contractions(const QuenchProtocol& protocol, double gamma, Temperature T,
                          double t, const MomentumGrid& grid) {
  if (!(t >= 0.0)) throw ConfigError("contractions: t must be >= 0");
  const Contractions c = PreparedQuench(protocol, gamma, T, grid).contractions_at(t);
  if (!std::isfinite(c.n0) || !std::isfinite(c.g1.real()) || !std::isfinite(c.g1.imag()) ||
      !std::isfinite(c.k1.real()) || !std::isfinite(c.k1.imag()))
    throw NumericalAbort("contractions: NaN in output (grid/parameter bug)");
  return c;
}

TwoSiteState two_site_state(const QuenchProtocol& protocol, double gamma, Temperature T,
                            double t, const MomentumGrid& grid) {
  if (!(t >= 0.0)) throw ConfigError("two_site_state: t must be >= 0");
  return PreparedQuench(protocol, gamma, T, grid).two_site_at(t);
}

}  // namespace xyqcr
