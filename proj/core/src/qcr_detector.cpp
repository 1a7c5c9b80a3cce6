#include "xyqcr/qcr_detector.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>

#include "xyqcr/errors.hpp"
#include "xyqcr/parallel.hpp"

namespace xyqcr {

namespace {
constexpr double kFlatTol = 1e-14;
constexpr int kBracketPoints = 32;

// |Q(t) - Q(0)| evaluator with a uniform-grid fast path.
struct ResponseFunction {
  std::function<double(double)> at;                       // exact evaluation
  std::function<std::vector<double>(double, int)> scan;   // values at k*dt
};

ResponseFunction make_response(QuantityKind q, double h0, double h1, double gamma, Temperature T,
                               const GridSpec& grid) {
  if (q == QuantityKind::AbsorbedEnergy) {
    QuenchProtocol protocol{h0, h1, 0.0};
    auto pulse = std::make_shared<PreparedPulse>(prepare_pulse(protocol, gamma, T, grid));
    return {
        [pulse](double tau) { return std::abs(pulse->delta_e_at(tau)); },
        [pulse](double dt, int count) {
          std::vector<double> v = pulse->scan(0.0, dt, count);
          for (double& x : v) x = std::abs(x);
          return v;
        },
    };
  }

  QuenchProtocol protocol{h0, h1, std::nullopt};
  auto quench = std::make_shared<PreparedQuench>(prepare_quench(protocol, gamma, T, grid));
  const bool logneg = (q == QuantityKind::LogNegativity);
  auto value = [logneg](const TwoSiteState& s) {
    return logneg ? log_negativity(s) : mutual_information(s);
  };
  const double q0 = value(quench->two_site_at(0.0));
  return {
      [quench, value, q0](double t) { return std::abs(value(quench->two_site_at(t)) - q0); },
      [quench, value, q0](double dt, int count) {
        const std::vector<TwoSiteState> states = quench->scan(0.0, dt, count);
        std::vector<double> v(states.size());
        for (std::size_t k = 0; k < states.size(); ++k) v[k] = std::abs(value(states[k]) - q0);
        return v;
      },
  };
}

// Golden-section maximization on [lo, hi] to absolute tolerance tol.
double golden_max(const std::function<double(double)>& f, double lo, double hi, double tol) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  return std::max(f1, f2);
}
}  // namespace

const char* quantity_name(QuantityKind q) {
  switch (q) {
    case QuantityKind::AbsorbedEnergy: return "energy";
    case QuantityKind::LogNegativity: return "logneg";
    case QuantityKind::MutualInformation: return "mi";
  }
  return "?";
}

void TimeSearchConfig::validate() const {
  if (!(dt > 0.0 && dt < t_max)) throw ConfigError("TimeSearchConfig: need 0 < dt < t_max");
  if (!(refine_tol > 0.0)) throw ConfigError("TimeSearchConfig: refine_tol must be > 0");
}

ResponseContext::ResponseContext(QuantityKind q, double h0, double h1, double gamma,
                                 TimeSearchConfig cfg, GridSpec grid)
    : q_(q), h0_(h0), h1_(h1), gamma_(gamma), cfg_(cfg), grid_(grid) {
  cfg_.validate();
}

double ResponseContext::max_response(Temperature T) const {
  const ResponseFunction f = make_response(q_, h0_, h1_, gamma_, T, grid_);

  const int count = static_cast<int>(std::floor(cfg_.t_max / cfg_.dt)) + 1;
  const std::vector<double> coarse = f.scan(cfg_.dt, count);
  int best = 0;
  for (int k = 1; k < count; ++k)
    if (coarse[k] > coarse[best]) best = k;
  if (coarse[best] < kFlatTol)
    throw FlatResponse("max_response: coarse scan below 1e-14 (h1 == h0?)");

  // The coarse values misrank peaks by up to ~f'' dt^2 / 8, which is far above
  // the eta = 1e-6 resolution detect_tstar needs. Refine every local maximum
  // that is competitive with the best bracket and keep the largest.
  const double cutoff = coarse[best] * (1.0 - 1e-3);
  double out = 0.0;
  for (int k = 0; k < count; ++k) {
    const bool local_max = (k == 0 || coarse[k] >= coarse[k - 1]) &&
                           (k == count - 1 || coarse[k] >= coarse[k + 1]);
    if (!local_max || coarse[k] < cutoff) continue;
    const double lo = std::max(0.0, (k - 1) * cfg_.dt);
    const double hi = std::min(cfg_.t_max, (k + 1) * cfg_.dt);
    out = std::max(out, golden_max(f.at, lo, hi, cfg_.refine_tol));
  }
  return out;
}

double ResponseContext::zero_denominator() const {
  if (!denom_) {
    const double d = max_response(Temperature::zero());
    if (d < kFlatTol) throw ZeroDenominator("scaled_response: dQmax(T=0) < 1e-14");
    denom_ = d;
  }
  return *denom_;
}

double ResponseContext::scaled_response(Temperature T) const {
  const double denom = zero_denominator();
  if (T.is_zero()) return 1.0;
  return max_response(T) / denom;
}

double max_response(QuantityKind q, double h0, double h1, double gamma, Temperature T,
                    const TimeSearchConfig& cfg, const GridSpec& grid) {
  return ResponseContext(q, h0, h1, gamma, cfg, grid).max_response(T);
}

double scaled_response(QuantityKind q, double h0, double h1, double gamma, Temperature T,
                       const TimeSearchConfig& cfg, const GridSpec& grid) {
  return ResponseContext(q, h0, h1, gamma, cfg, grid).scaled_response(T);
}

ResponseCurve sweep_response_curve(QuantityKind q, double h0, double h1, double gamma,
                                   const std::vector<double>& T_grid, const TimeSearchConfig& cfg,
                                   const GridSpec& grid, int workers) {
  ResponseCurve curve;
  curve.quantity = q;
  curve.h0 = h0;
  curve.h1 = h1;
  curve.gamma = gamma;

  ResponseContext ctx(q, h0, h1, gamma, cfg, grid);
  const double denom = ctx.zero_denominator();  // primed before the fan-out

  curve.samples = parallel_map<ResponseCurve::Sample>(
      static_cast<int>(T_grid.size()), workers, [&](int i) {
        ResponseCurve::Sample s;
        s.T = T_grid[i];
        if (s.T == 0.0) {
          s.max_response = denom;
          s.scaled_response = 1.0;
        } else {
          s.max_response = ctx.max_response(Temperature::of(s.T));
          s.scaled_response = s.max_response / denom;
        }
        return s;
      });
  return curve;
}

const char* tstar_status_name(TstarResult::Status s) {
  switch (s) {
    case TstarResult::Status::Crossed: return "ok";
    case TstarResult::Status::Saturated: return "saturated";
    case TstarResult::Status::NonMonotone: return "nonmonotone";
    case TstarResult::Status::Flat: return "flat";
  }
  return "?";
}

TstarResult detect_tstar(const ResponseContext& ctx, double eta, double T_hi) {
  if (!(eta > 0.0)) throw ConfigError("detect_tstar: eta must be > 0");
  if (!(T_hi > 0.0)) throw ConfigError("detect_tstar: T_hi must be > 0");

  const double denom = ctx.zero_denominator();
  auto deviation = [&](double T) {
    return std::abs(ctx.max_response(Temperature::of(T)) - denom) / denom;
  };

  // bracketing scan; g(T->0) = 0 by construction
  std::vector<double> g(kBracketPoints + 1, 0.0);
  int first_cross = -1;
  for (int i = 1; i <= kBracketPoints; ++i) {
    const double T = T_hi * i / kBracketPoints;
    g[i] = deviation(T);
    if (first_cross < 0 && g[i] >= eta) first_cross = i;
  }

  TstarResult out;
  if (first_cross < 0) {
    out.status = TstarResult::Status::Saturated;
    out.tstar = T_hi;
    out.bracket_lo = out.bracket_hi = T_hi;
    return out;
  }

  out.bracket_lo = T_hi * (first_cross - 1) / kBracketPoints;
  out.bracket_hi = T_hi * first_cross / kBracketPoints;

  for (int i = first_cross + 1; i <= kBracketPoints; ++i) {
    if (g[i] < eta) {
      out.status = TstarResult::Status::NonMonotone;
      out.tstar = 0.5 * (out.bracket_lo + out.bracket_hi);
      return out;
    }
  }

  // bisection on the first bracket; tolerance scales with the window
  const double tol = 1e-5 * (T_hi / 0.1);
  double lo = out.bracket_lo, hi = out.bracket_hi;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (deviation(mid) >= eta)
      hi = mid;
    else
      lo = mid;
  }
  out.status = TstarResult::Status::Crossed;
  out.tstar = 0.5 * (lo + hi);
  return out;
}

namespace {
enum class Flank { Both, Left, Right };

LinearFit fit_boundary(const std::vector<QcrPoint>& points, double T_hi, Flank flank) {
  LinearFit fit;
  std::vector<double> x, y;
  for (const auto& p : points) {
    if (!p.error.empty()) continue;
    if (p.tstar.status != TstarResult::Status::Crossed) continue;
    if (!(p.tstar.tstar < T_hi)) continue;
    if (flank == Flank::Left && !(p.h0 < 1.0)) continue;
    if (flank == Flank::Right && !(p.h0 > 1.0)) continue;
    x.push_back(std::abs(p.h0 - 1.0));
    y.push_back(p.tstar.tstar);
  }
  fit.points = static_cast<int>(x.size());
  if (fit.points < 2) return fit;

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double n = static_cast<double>(x.size());
  const double det = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / det;
  fit.intercept = (sy * sxx - sx * sxy) / det;

  double ss_res = 0, ss_tot = 0;
  const double ybar = sy / n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double pred = fit.slope * x[i] + fit.intercept;
    ss_res += (y[i] - pred) * (y[i] - pred);
    ss_tot += (y[i] - ybar) * (y[i] - ybar);
  }
  fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  fit.window_lo = *std::min_element(x.begin(), x.end());
  fit.window_hi = *std::max_element(x.begin(), x.end());
  return fit;
}
}  // namespace

QcrBoundary map_qcr(QuantityKind q, const std::vector<double>& h0_grid, const GammaMode& gamma_mode,
                    double h1, double eta, const TimeSearchConfig& cfg, const GridSpec& grid,
                    double T_hi, int workers) {
  QcrBoundary boundary;
  boundary.quantity = q;
  boundary.h1 = h1;
  boundary.eta = eta;
  boundary.T_hi = T_hi;

  boundary.points = parallel_map<QcrPoint>(
      static_cast<int>(h0_grid.size()), workers, [&](int i) {
        QcrPoint p;
        p.h0 = h0_grid[i];
        p.gamma = gamma_mode.at(p.h0);
        try {
          ResponseContext ctx(q, p.h0, h1, p.gamma, cfg, grid);
          p.tstar = detect_tstar(ctx, eta, T_hi);
        } catch (const FlatResponse&) {
          p.tstar.status = TstarResult::Status::Flat;
          p.error = "flat response (h0 == h1)";
        } catch (const ZeroDenominator&) {
          p.tstar.status = TstarResult::Status::Flat;
          p.error = "zero T=0 denominator";
        } catch (const Error& e) {
          p.tstar.status = TstarResult::Status::Flat;
          p.error = e.what();
        }
        return p;
      });

  boundary.fit = fit_boundary(boundary.points, T_hi, Flank::Both);
  boundary.fit_left = fit_boundary(boundary.points, T_hi, Flank::Left);
  boundary.fit_right = fit_boundary(boundary.points, T_hi, Flank::Right);
  return boundary;
}

}  // namespace xyqcr
