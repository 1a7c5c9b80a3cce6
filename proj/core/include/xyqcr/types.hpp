#pragma once

#include <cmath>
#include <complex>
#include <optional>

#include "xyqcr/errors.hpp"

namespace xyqcr {

using cplx = std::complex<double>;

/// One XY-chain Hamiltonian instance. `h` is stored as the ratio h/J,
/// energies elsewhere are reported in units of J, times in hbar/J.
struct ModelParams {
  double J = 1.0;
  double gamma = 0.0;
  double h = 0.0;

  void validate() const {
    if (!(J > 0.0)) throw ConfigError("ModelParams: J must be > 0");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("ModelParams: gamma must be in [0,1]");
    if (!std::isfinite(h)) throw ConfigError("ModelParams: h must be finite");
  }
};

/// Field protocol h0 -> h1. A present pulse_duration means the square pulse
/// (h returns to h0 after tau); absent means a sudden quench held at h1.
struct QuenchProtocol {
  double h0 = 0.0;
  double h1 = 0.0;
  std::optional<double> pulse_duration;

  void validate() const {
    if (!std::isfinite(h0) || !std::isfinite(h1)) throw ConfigError("QuenchProtocol: fields must be finite");
    if (pulse_duration && !(*pulse_duration >= 0.0)) throw ConfigError("QuenchProtocol: pulse_duration must be >= 0");
  }
};

/// Temperature in units k_B T / J with an explicit zero-limit value, so the
/// T -> 0 branch never goes through exp(-E/T).
class Temperature {
 public:
  static Temperature zero() { return Temperature(); }
  static Temperature of(double t) {
    if (!(t >= 0.0)) throw NegativeTemperature("Temperature must be >= 0");
    Temperature out;
    out.zero_ = (t == 0.0);
    out.value_ = t;
    return out;
  }

  bool is_zero() const { return zero_; }
  double value() const { return value_; }  // meaningful only when !is_zero()

 private:
  Temperature() = default;
  bool zero_ = true;
  double value_ = 0.0;
};

/// Real-space fermionic contractions at nearest-neighbor separation.
struct Contractions {
  double n0 = 0.0;   // <c_j^dag c_j>
  cplx g1{0.0, 0.0}; // <c_j^dag c_{j+1}>
  cplx k1{0.0, 0.0}; // <c_j c_{j+1}>
};

/// The five nonzero quantities defining the nearest-neighbor reduced state.
struct TwoSiteState {
  double mz = 0.0;
  double cxx = 0.0;
  double cyy = 0.0;
  double czz = 0.0;
  double cxy = 0.0;  // equals cyx at all times; single stored field
};

}  // namespace xyqcr
