#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "rdeval/rd_model.hpp"

namespace rdeval {

enum class FitDomain { quality_to_lograte, lograte_to_quality };

struct Knot {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Knot&, const Knot&) = default;
};

/// Piecewise cubic with exact evaluation and exact analytic integration.
/// Valid on [min_x, max_x] only; there is no extrapolation.
class FittedCurve {
public:
  /// y(x) = c0 + c1*t + c2*t^2 + c3*t^3 with t = x - x_ref on [lo, hi].
  struct Segment {
    double lo = 0.0;
    double hi = 0.0;
    double x_ref = 0.0;
    std::array<double, 4> c{};
  };

  FittedCurve(Interpolator kind, std::vector<Knot> knots, std::vector<Segment> segments,
              bool interpolating, bool fallback_fired,
              std::optional<std::array<double, 4>> global_coefficients);

  Interpolator kind() const noexcept { return kind_; }
  bool interpolating() const noexcept { return interpolating_; }
  bool fallback_fired() const noexcept { return fallback_fired_; }

  double min_x() const noexcept { return segments_.front().lo; }
  double max_x() const noexcept { return segments_.back().hi; }

  const std::vector<Knot>& knots() const noexcept { return knots_; }
  const std::vector<Segment>& segments() const noexcept { return segments_; }

  /// Power-basis coefficients (c0..c3 in global x) when the fit is a single
  /// polynomial, i.e. for cubic_polyfit and its fallbacks. Empty for pchip.
  const std::optional<std::array<double, 4>>& global_coefficients() const noexcept {
    return global_coefficients_;
  }

  /// Throws OutOfDomain for x outside [min_x, max_x].
  double evaluate(double x) const;

  /// Exact integral over [lo, hi] via the antiderivative; requires
  /// lo < hi and [lo, hi] inside the fit domain.
  double integrate(double lo, double hi) const;

private:
  const Segment& segment_at(double x) const;

  Interpolator kind_;
  std::vector<Knot> knots_;
  std::vector<Segment> segments_;
  bool interpolating_ = true;
  bool fallback_fired_ = false;
  std::optional<std::array<double, 4>> global_coefficients_;
};

/// Projects a curve into a fit domain: (quality, log10 rate) pairs sorted by
/// quality, or (log10 rate, quality) pairs sorted by log-rate.
/// Throws DuplicateAbscissa when two points share the abscissa.
std::vector<Knot> to_fit_domain(const RdCurve& curve, FitDomain domain);

/// The classic BD fit: the unique degree<=3 polynomial through exactly four
/// knots. With allow_fallback, 3 knots fit a quadratic, 2 a line, and more
/// than 4 a least-squares cubic (flagged non-interpolating); all fallbacks
/// set fallback_fired.
FittedCurve fit_cubic_polyfit(std::span<const Knot> knots, bool allow_fallback = false);

/// Monotone piecewise cubic Hermite interpolant (Fritsch-Carlson slope
/// limiting, three-point endpoint slopes). Needs >= 2 knots with distinct x.
FittedCurve fit_pchip(std::span<const Knot> knots);

inline double integrate(const FittedCurve& fit, double lo, double hi) {
  return fit.integrate(lo, hi);
}

}  // namespace rdeval
