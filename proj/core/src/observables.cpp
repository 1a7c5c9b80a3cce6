#include "xyqcr/observables.hpp"

#include <cmath>
#include <numbers>

#include "xyqcr/errors.hpp"

namespace xyqcr {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kClipTol = 1e-10;
constexpr double kPsdAbort = -1e-8;

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

// Spectrum of the assembled matrix from its two X-blocks.
std::array<double, 4> rho_spectrum(const TwoSiteState& s) {
  const double inner = std::abs(s.cxx + s.cyy);
  const double outer =
      std::sqrt(4.0 * s.mz * s.mz + (s.cxx - s.cyy) * (s.cxx - s.cyy) + 4.0 * s.cxy * s.cxy);
  return {0.25 * (1.0 - s.czz - inner), 0.25 * (1.0 - s.czz + inner),
          0.25 * (1.0 + s.czz - outer), 0.25 * (1.0 + s.czz + outer)};
}
}  // namespace

Eigen::Matrix4cd assemble_rho(const TwoSiteState& s) {
  Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  Eigen::Matrix2cd sx, sy, sz;
  sx << 0, 1, 1, 0;
  sy << 0, cplx(0, -1), cplx(0, 1), 0;
  sz << 1, 0, 0, -1;

  auto kron = [](const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    Eigen::Matrix4cd out;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
  };

  Eigen::Matrix4cd rho = kron(id, id);
  rho += s.mz * (kron(sz, id) + kron(id, sz));
  rho += s.cxx * kron(sx, sx);
  rho += s.cyy * kron(sy, sy);
  rho += s.czz * kron(sz, sz);
  rho += s.cxy * (kron(sx, sy) + kron(sy, sx));
  rho *= 0.25;

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) < kPsdAbort) throw NotPositive("assemble_rho: min eigenvalue < -1e-8");
  return rho;
}

double negativity(const TwoSiteState& s) {
  // In the rotated frame the {x,y} block is diagonal; the two candidate
  // negative partial-transpose eigenvalues reduce to:
  const double n1 =
      1.0 + s.czz - std::sqrt((s.cxx + s.cyy) * (s.cxx + s.cyy) + 4.0 * s.mz * s.mz);
  const double n2 =
      1.0 - s.czz - std::sqrt((s.cxx - s.cyy) * (s.cxx - s.cyy) + 4.0 * s.cxy * s.cxy);
  return -0.25 * std::min({0.0, n1, n2});
}

double negativity_partial_transpose(const TwoSiteState& s) {
  const Eigen::Matrix4cd rho = assemble_rho(s);
  // transpose subsystem B: swap the column-qubit index on each 2x2 sub-block
  Eigen::Matrix4cd pt;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int ap = 0; ap < 2; ++ap)
        for (int bp = 0; bp < 2; ++bp) pt(2 * a + bp, 2 * ap + b) = rho(2 * a + b, 2 * ap + bp);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(pt, Eigen::EigenvaluesOnly);
  double neg = 0.0;
  for (int i = 0; i < 4; ++i) neg -= std::min(0.0, es.eigenvalues()(i));
  return neg;
}

double log_negativity(const TwoSiteState& s) { return std::log2(2.0 * negativity(s) + 1.0); }

double entropy_bits(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p) {
    if (x < -kClipTol) throw NotPositive("entropy_bits: probability < -1e-10");
    if (x < 0.0) x = 0.0;
    h -= xlog2x(x);
  }
  return h;
}

double mutual_information(const TwoSiteState& s) {
  const Eigen::Matrix4cd rho = assemble_rho(s);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho, Eigen::EigenvaluesOnly);
  std::vector<double> pab(4);
  for (int i = 0; i < 4; ++i) pab[i] = es.eigenvalues()(i);
  const std::vector<double> pa = {0.5 * (1.0 + s.mz), 0.5 * (1.0 - s.mz)};
  return 2.0 * entropy_bits(pa) - entropy_bits(pab);
}

double mutual_information_closed_form(const TwoSiteState& s) {
  const auto spec = rho_spectrum(s);
  const std::vector<double> pab(spec.begin(), spec.end());
  const std::vector<double> pa = {0.5 * (1.0 + s.mz), 0.5 * (1.0 - s.mz)};
  return 2.0 * entropy_bits(pa) - entropy_bits(pab);
}

PreparedPulse::PreparedPulse(const QuenchProtocol& protocol, double gamma, Temperature T,
                             const MomentumGrid& grid) {
  protocol.validate();
  const std::size_t n = grid.size();
  omega_.resize(n);
  b_.resize(n);
  c_.resize(n);

  const ModelParams p0{1.0, gamma, protocol.h0};

  for (std::size_t m = 0; m < n; ++m) {
    const double phi = grid.nodes[m];
    // block traces are per momentum pair (p, -p): the per-site fold over
    // (0, pi) carries 1/(2 pi), unlike the per-mode contraction channels
    const double w = grid.weights[m] / (2.0 * kPi);

    const Eigen::Matrix2cd h0e = block_hamiltonian(phi, p0).even_block;
    const ModeState rho0 = thermal_block_state(phi, p0, T);
    const double lambda1 = dispersion(phi, protocol.h1, gamma);
    const Eigen::Matrix2cd u1 = bogoliubov_unitary(phi, protocol.h1, gamma);

    const Eigen::Matrix2cd ht = u1.adjoint() * h0e * u1;
    const Eigen::Matrix2cd rt = u1.adjoint() * rho0.even_block * u1;

    // Tr(H~0 rho~(tau)) - Tr(H~0 rho~(0)); diagonal parts cancel, the cross
    // term carries the e^{+- i w tau} phases. Odd sector drops exactly.
    const cplx z = ht(0, 1) * rt(1, 0);
    omega_[m] = 2.0 * lambda1;
    b_[m] = w * 2.0 * z.real();
    c_[m] = w * 2.0 * z.imag();
  }
}

double PreparedPulse::delta_e_at(double tau) const {
  double acc = 0.0;
  for (std::size_t m = 0; m < omega_.size(); ++m) {
    const double c = std::cos(omega_[m] * tau);
    const double s = std::sin(omega_[m] * tau);
    acc += b_[m] * (c - 1.0) + c_[m] * s;
  }
  return acc;
}

std::vector<double> PreparedPulse::scan(double tau0, double dtau, int count) const {
  const std::size_t n = omega_.size();
  std::vector<double> cs(n), sn(n), dc(n), ds(n);
  for (std::size_t m = 0; m < n; ++m) {
    cs[m] = std::cos(omega_[m] * tau0);
    sn[m] = std::sin(omega_[m] * tau0);
    dc[m] = std::cos(omega_[m] * dtau);
    ds[m] = std::sin(omega_[m] * dtau);
  }
  std::vector<double> out(count);
  for (int k = 0; k < count; ++k) {
    double acc = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      const double c = cs[m];
      const double s = sn[m];
      acc += b_[m] * (c - 1.0) + c_[m] * s;
      cs[m] = c * dc[m] - s * ds[m];
      sn[m] = s * dc[m] + c * ds[m];
    }
    out[k] = acc;
  }
  return out;
}

PreparedPulse prepare_pulse(const QuenchProtocol& protocol, double gamma, Temperature T,
                            const GridSpec& spec) {
  int n = spec.nodes;
  PreparedPulse pp(protocol, gamma, T, pooled_grid(n));
  if (!spec.adaptive) return pp;

  constexpr double probes[] = {0.43, 1.7, 5.3, 11.0};
  while (n < spec.cap) {
    PreparedPulse finer(protocol, gamma, T, pooled_grid(2 * n));
    double diff = 0.0;
    for (double tau : probes) diff = std::max(diff, std::abs(pp.delta_e_at(tau) - finer.delta_e_at(tau)));
    if (diff < spec.tol) return pp;
    n *= 2;
    pp = std::move(finer);
  }
  return pp;
}

EnergyResponse energy_absorbed(const QuenchProtocol& protocol, double gamma, Temperature T,
                               const MomentumGrid& grid) {
  if (!protocol.pulse_duration)
    throw ConfigError("energy_absorbed: protocol must carry a pulse duration");
  EnergyResponse out;
  out.T = T.is_zero() ? 0.0 : T.value();
  out.tau = *protocol.pulse_duration;
  out.delta_e = PreparedPulse(protocol, gamma, T, grid).delta_e_at(out.tau);
  if (!std::isfinite(out.delta_e)) throw NumericalAbort("energy_absorbed: NaN in output");
  return out;
}

}  // namespace xyqcr
