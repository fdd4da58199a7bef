#pragma once

#include <optional>

#include "rdeval/rd_model.hpp"

namespace rdeval {

enum class OverlapAxis { quality, log_rate };

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const noexcept { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Intersection of the two curves' spans along the given axis.
/// Returns nullopt when the intersection is empty, a single point, or a
/// degenerate sliver (< 0.01 dB on quality, < 0.001 on log10-rate).
std::optional<Interval> overlap(const RdCurve& reference, const RdCurve& test, OverlapAxis axis);

/// BD-rate in percent: average log-rate gap at equal quality over the quality
/// overlap, exponentiated. Negative means the test codec saves rate.
/// Integration is clipped to the overlap; fits never extrapolate.
BdResult bd_rate(const RdCurve& reference, const RdCurve& test,
                 Interpolator interpolator = Interpolator::pchip, bool cubic_fallback = false);

/// BD-PSNR in dB: average quality gap at equal rate over the log-rate
/// overlap. Positive means the test codec has higher quality.
BdResult bd_psnr(const RdCurve& reference, const RdCurve& test,
                 Interpolator interpolator = Interpolator::pchip, bool cubic_fallback = false);

}  // namespace rdeval
