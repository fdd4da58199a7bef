#include "rdeval/bd_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rdeval/interpolation.hpp"

namespace rdeval {

namespace {

// Below these widths an overlap is a degenerate sliver and averaging over it
// is meaningless.
constexpr double kMinQualityOverlap = 0.01;   // dB
constexpr double kMinLogRateOverlap = 0.001;  // log10 units

Interval axis_span(const RdCurve& curve, OverlapAxis axis) {
  if (axis == OverlapAxis::quality) return {curve.min_quality(), curve.max_quality()};
  return {std::log10(curve.min_rate()), std::log10(curve.max_rate())};
}

FittedCurve fit(const RdCurve& curve, FitDomain domain, Interpolator interpolator,
                bool cubic_fallback) {
  const std::vector<Knot> knots = to_fit_domain(curve, domain);
  if (interpolator == Interpolator::cubic_polyfit) {
    return fit_cubic_polyfit(knots, cubic_fallback);
  }
  return fit_pchip(knots);
}

[[noreturn]] void throw_no_overlap(const RdCurve& reference, const RdCurve& test,
                                   OverlapAxis axis) {
  const Interval a = axis_span(reference, axis);
  const Interval b = axis_span(test, axis);
  std::ostringstream os;
  os << (axis == OverlapAxis::quality ? "quality" : "log-rate") << " spans [" << a.lo << ", "
     << a.hi << "] (" << reference.label() << ") and [" << b.lo << ", " << b.hi << "] ("
     << test.label() << ") do not usefully overlap";
  throw RdError(ErrorCode::NoOverlap, os.str());
}

}  // namespace

std::optional<Interval> overlap(const RdCurve& reference, const RdCurve& test, OverlapAxis axis) {
  const Interval a = axis_span(reference, axis);
  const Interval b = axis_span(test, axis);
  const Interval common{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
  const double min_width = axis == OverlapAxis::quality ? kMinQualityOverlap : kMinLogRateOverlap;
  if (!(common.width() >= min_width)) return std::nullopt;
  return common;
}

BdResult bd_rate(const RdCurve& reference, const RdCurve& test, Interpolator interpolator,
                 bool cubic_fallback) {
  const std::optional<Interval> bounds = overlap(reference, test, OverlapAxis::quality);
  if (!bounds) throw_no_overlap(reference, test, OverlapAxis::quality);

  const FittedCurve ref_fit = fit(reference, FitDomain::quality_to_lograte, interpolator, cubic_fallback);
  const FittedCurve test_fit = fit(test, FitDomain::quality_to_lograte, interpolator, cubic_fallback);

  const double width = bounds->width();
  const double mean_log_gap =
      (test_fit.integrate(bounds->lo, bounds->hi) - ref_fit.integrate(bounds->lo, bounds->hi)) / width;

  BdResult result;
  result.value = 100.0 * (std::pow(10.0, mean_log_gap) - 1.0);
  result.metric = Metric::bd_rate;
  result.overlap_low = bounds->lo;
  result.overlap_high = bounds->hi;
  result.interpolator = interpolator;
  result.fallback_fired = ref_fit.fallback_fired() || test_fit.fallback_fired();
  return result;
}

BdResult bd_psnr(const RdCurve& reference, const RdCurve& test, Interpolator interpolator,
                 bool cubic_fallback) {
  const std::optional<Interval> bounds = overlap(reference, test, OverlapAxis::log_rate);
  if (!bounds) throw_no_overlap(reference, test, OverlapAxis::log_rate);

  const FittedCurve ref_fit = fit(reference, FitDomain::lograte_to_quality, interpolator, cubic_fallback);
  const FittedCurve test_fit = fit(test, FitDomain::lograte_to_quality, interpolator, cubic_fallback);

  const double width = bounds->width();

  BdResult result;
  result.value =
      (test_fit.integrate(bounds->lo, bounds->hi) - ref_fit.integrate(bounds->lo, bounds->hi)) / width;
  result.metric = Metric::bd_psnr;
  result.overlap_low = bounds->lo;
  result.overlap_high = bounds->hi;
  result.interpolator = interpolator;
  result.fallback_fired = ref_fit.fallback_fired() || test_fit.fallback_fired();
  return result;
}

}  // namespace rdeval
