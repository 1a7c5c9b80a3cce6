#pragma once

#include <optional>
#include <string>
#include <vector>

#include "xyqcr/mode_dynamics.hpp"
#include "xyqcr/observables.hpp"
#include "xyqcr/types.hpp"

namespace xyqcr {

enum class QuantityKind { AbsorbedEnergy, LogNegativity, MutualInformation };

const char* quantity_name(QuantityKind q);

/// Search window for the response maximum over time.
struct TimeSearchConfig {
  double t_max = 20.0;
  double dt = 0.005;
  double refine_tol = 1e-8;

  void validate() const;
};

/// Evaluator for one (quantity, h0, h1, gamma) tuple. Caches the T = 0
/// denominator so a temperature sweep computes it exactly once.
class ResponseContext {
 public:
  ResponseContext(QuantityKind q, double h0, double h1, double gamma, TimeSearchConfig cfg,
                  GridSpec grid);

  /// max_t |Q(T;t) - Q(T;0)| (for energy: max_tau |dE(T,tau)|), coarse scan
  /// plus golden-section refinement. Throws FlatResponse below 1e-14.
  double max_response(Temperature T) const;

  /// max_response(T) / max_response(Zero); exactly 1 at T = Zero.
  double scaled_response(Temperature T) const;

  /// Cached max_response(Zero); throws ZeroDenominator below 1e-14.
  double zero_denominator() const;

  QuantityKind quantity() const { return q_; }
  double h0() const { return h0_; }
  double h1() const { return h1_; }
  double gamma() const { return gamma_; }
  const TimeSearchConfig& config() const { return cfg_; }

 private:
  QuantityKind q_;
  double h0_, h1_, gamma_;
  TimeSearchConfig cfg_;
  GridSpec grid_;
  mutable std::optional<double> denom_;
};

double max_response(QuantityKind q, double h0, double h1, double gamma, Temperature T,
                    const TimeSearchConfig& cfg, const GridSpec& grid);

double scaled_response(QuantityKind q, double h0, double h1, double gamma, Temperature T,
                       const TimeSearchConfig& cfg, const GridSpec& grid);

/// One temperature sweep of the maximal and scaled responses at fixed
/// (h0, h1, gamma). The T = 0 denominator is computed once; samples keep the
/// input grid order.
struct ResponseCurve {
  QuantityKind quantity{};
  double h0 = 0.0;
  double h1 = 1.0;
  double gamma = 0.8;
  struct Sample {
    double T = 0.0;
    double max_response = 0.0;
    double scaled_response = 1.0;
  };
  std::vector<Sample> samples;
};

ResponseCurve sweep_response_curve(QuantityKind q, double h0, double h1, double gamma,
                                   const std::vector<double>& T_grid, const TimeSearchConfig& cfg,
                                   const GridSpec& grid, int workers);

/// Outcome of the T* search at one h0.
struct TstarResult {
  enum class Status { Crossed, Saturated, NonMonotone, Flat };
  Status status = Status::Crossed;
  double tstar = 0.0;        // crossing (or bracket midpoint when flagged)
  double bracket_lo = 0.0;   // bracketing interval from the 32-point scan
  double bracket_hi = 0.0;
};

const char* tstar_status_name(TstarResult::Status s);

/// Solve |dQmax(T) - dQmax(0)| / dQmax(0) = eta for the first crossing in
/// (0, T_hi] by a 32-point bracketing scan plus bisection. Saturates at T_hi
/// when the deviation never reaches eta; flags a recrossing scan as
/// NonMonotone and returns the first bracket instead of a point.
TstarResult detect_tstar(const ResponseContext& ctx, double eta, double T_hi);

/// Gamma assignment for a boundary sweep: fixed, or the multicritical rule
/// gamma = 1 - |h0| applied per point. For h0 > 1 the rule turns negative;
/// a global x <-> y rotation maps gamma to -gamma without touching any of the
/// reported quantities, so the magnitude is used.
struct GammaMode {
  enum class Kind { Fixed, Multicritical };
  Kind kind = Kind::Fixed;
  double gamma = 0.8;

  static GammaMode fixed(double g) { return {Kind::Fixed, g}; }
  static GammaMode multicritical() { return {Kind::Multicritical, 0.0}; }
  double at(double h0) const {
    return kind == Kind::Fixed ? gamma : std::abs(1.0 - std::abs(h0));
  }
};

struct QcrPoint {
  double h0 = 0.0;
  double gamma = 0.0;
  TstarResult tstar;
  std::string error;  // non-empty when the point failed (e.g. FlatResponse)
};

struct LinearFit {
  double slope = 0.0;      // the constant C of T* ~ C |h0 - hc|
  double intercept = 0.0;
  double r2 = 0.0;
  int points = 0;
  double window_lo = 0.0;  // |h0 - 1| range used by the fit
  double window_hi = 0.0;
};

struct QcrBoundary {
  QuantityKind quantity{};
  double h1 = 1.0;
  double eta = 1e-6;
  double T_hi = 0.1;
  std::vector<QcrPoint> points;
  // The cone is bounded by one straight line per side whose slopes need not
  // match (they measurably differ), so each flank carries its own fit; the
  // pooled fit over |h0 - 1| is kept for reporting.
  LinearFit fit;
  LinearFit fit_left;   // h0 < 1
  LinearFit fit_right;  // h0 > 1
};

/// T* over an h0 grid (parallel, ordered merge) plus the Eq.-style linear fit
/// of T* against |h0 - 1| over the unsaturated points. Per-point failures are
/// recorded as flags; the sweep itself never aborts.
QcrBoundary map_qcr(QuantityKind q, const std::vector<double>& h0_grid, const GammaMode& gamma_mode,
                    double h1, double eta, const TimeSearchConfig& cfg, const GridSpec& grid,
                    double T_hi, int workers);

}  // namespace xyqcr
