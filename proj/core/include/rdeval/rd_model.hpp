#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rdeval/error.hpp"

namespace rdeval {

enum class RateUnit { bpp, kbps };
enum class Interpolator { cubic_polyfit, pchip };
enum class Metric { bd_rate, bd_psnr };

std::string_view to_string(RateUnit unit);
std::string_view to_string(Interpolator interpolator);
std::string_view to_string(Metric metric);
RateUnit rate_unit_from_string(std::string_view s);
Interpolator interpolator_from_string(std::string_view s);
Metric metric_from_string(std::string_view s);

/// One operating point of a codec on a sequence: rate > 0, quality in dB.
struct RdPoint {
  double rate = 0.0;
  double quality = 0.0;

  friend bool operator==(const RdPoint&, const RdPoint&) = default;
};

/// What curve validation does with quality drops along increasing rate.
enum class MonotonePolicy {
  reject,          ///< NonMonotoneQuality error (default)
  drop_dominated,  ///< drop points that another point beats on both axes
};

/// A validated RD curve: points sorted by strictly increasing rate,
/// quality non-decreasing, at least two points.
class RdCurve {
public:
  /// Sorts by rate, then enforces the curve invariants.
  static RdCurve validate(std::vector<RdPoint> points, RateUnit unit = RateUnit::bpp,
                          std::string label = {}, std::string sequence = {},
                          MonotonePolicy policy = MonotonePolicy::reject);

  const std::vector<RdPoint>& points() const noexcept { return points_; }
  RateUnit rate_unit() const noexcept { return unit_; }
  const std::string& label() const noexcept { return label_; }
  const std::string& sequence() const noexcept { return sequence_; }

  std::size_t size() const noexcept { return points_.size(); }
  double min_rate() const noexcept { return points_.front().rate; }
  double max_rate() const noexcept { return points_.back().rate; }
  double min_quality() const noexcept { return points_.front().quality; }
  double max_quality() const noexcept { return points_.back().quality; }

  /// Same curve with rates scaled by k > 0 (unit conversions, invariance tests).
  RdCurve scaled_rates(double k) const;
  /// Same curve with qualities shifted by c dB.
  RdCurve shifted_quality(double c) const;

  friend bool operator==(const RdCurve&, const RdCurve&) = default;

private:
  RdCurve() = default;

  std::vector<RdPoint> points_;
  RateUnit unit_ = RateUnit::bpp;
  std::string label_;
  std::string sequence_;
};

/// Dense codec x sequence matrix of curves with a uniform rate unit.
/// Codec and sequence identifiers are kept in sorted order, so the set is
/// independent of the order curves were supplied in.
class EvaluationSet {
public:
  static EvaluationSet validate(std::vector<RdCurve> curves);

  const std::vector<std::string>& codecs() const noexcept { return codecs_; }
  const std::vector<std::string>& sequences() const noexcept { return sequences_; }
  RateUnit rate_unit() const noexcept { return unit_; }

  bool has_codec(const std::string& codec) const;
  const RdCurve& curve(const std::string& codec, const std::string& sequence) const;

  /// Copy of the set with one sequence removed (leave-one-out support).
  EvaluationSet excluding(const std::string& sequence) const;

  /// All curves in deterministic (codec, sequence) order.
  std::vector<RdCurve> all_curves() const;

  friend bool operator==(const EvaluationSet&, const EvaluationSet&) = default;

private:
  EvaluationSet() = default;

  std::vector<std::string> codecs_;
  std::vector<std::string> sequences_;
  std::map<std::pair<std::string, std::string>, RdCurve> curves_;
  RateUnit unit_ = RateUnit::bpp;
};

/// A BD metric value plus the bounds it was integrated over.
/// Bounds live in the integration domain: quality (dB) for bd_rate,
/// log10-rate for bd_psnr.
struct BdResult {
  double value = 0.0;
  Metric metric = Metric::bd_rate;
  double overlap_low = 0.0;
  double overlap_high = 0.0;
  Interpolator interpolator = Interpolator::pchip;
  bool fallback_fired = false;  ///< cubic fit fell back to another degree

  friend bool operator==(const BdResult&, const BdResult&) = default;
};

}  // namespace rdeval
