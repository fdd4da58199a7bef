#include "rdeval/rd_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace rdeval {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyOrSingleton: return "EmptyOrSingleton";
    case ErrorCode::DuplicateRate: return "DuplicateRate";
    case ErrorCode::NonMonotoneQuality: return "NonMonotoneQuality";
    case ErrorCode::NonPositiveRate: return "NonPositiveRate";
    case ErrorCode::NonFiniteQuality: return "NonFiniteQuality";
    case ErrorCode::MissingCell: return "MissingCell";
    case ErrorCode::MixedUnits: return "MixedUnits";
    case ErrorCode::DuplicateCell: return "DuplicateCell";
    case ErrorCode::DuplicateAbscissa: return "DuplicateAbscissa";
    case ErrorCode::WrongKnotCount: return "WrongKnotCount";
    case ErrorCode::TooFewKnots: return "TooFewKnots";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::NoOverlap: return "NoOverlap";
    case ErrorCode::RaggedPointCounts: return "RaggedPointCounts";
    case ErrorCode::GridOutsideSpan: return "GridOutsideSpan";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::MixedMetricKinds: return "MixedMetricKinds";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::NonNumericField: return "NonNumericField";
    case ErrorCode::DuplicateTriple: return "DuplicateTriple";
    case ErrorCode::UnknownUnit: return "UnknownUnit";
    case ErrorCode::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

std::string_view to_string(RateUnit unit) {
  return unit == RateUnit::bpp ? "bpp" : "kbps";
}

std::string_view to_string(Interpolator interpolator) {
  return interpolator == Interpolator::cubic_polyfit ? "cubic_polyfit" : "pchip";
}

std::string_view to_string(Metric metric) {
  return metric == Metric::bd_rate ? "bd_rate" : "bd_psnr";
}

RateUnit rate_unit_from_string(std::string_view s) {
  if (s == "bpp") return RateUnit::bpp;
  if (s == "kbps") return RateUnit::kbps;
  throw RdError(ErrorCode::UnknownUnit, "rate unit must be bpp or kbps, got '" + std::string(s) + "'");
}

Interpolator interpolator_from_string(std::string_view s) {
  if (s == "cubic_polyfit" || s == "cubic") return Interpolator::cubic_polyfit;
  if (s == "pchip") return Interpolator::pchip;
  throw RdError(ErrorCode::InvalidParameter,
                "interpolator must be cubic or pchip, got '" + std::string(s) + "'");
}

Metric metric_from_string(std::string_view s) {
  if (s == "bd_rate" || s == "rate") return Metric::bd_rate;
  if (s == "bd_psnr" || s == "psnr") return Metric::bd_psnr;
  throw RdError(ErrorCode::InvalidParameter,
                "metric must be rate or psnr, got '" + std::string(s) + "'");
}

RdCurve RdCurve::validate(std::vector<RdPoint> points, RateUnit unit, std::string label,
                          std::string sequence, MonotonePolicy policy) {
  auto describe = [&](const RdPoint& p) {
    std::ostringstream os;
    os << "(" << p.rate << ", " << p.quality << ")";
    if (!label.empty() || !sequence.empty()) os << " in curve " << label << "/" << sequence;
    return os.str();
  };

  if (points.size() < 2) {
    throw RdError(ErrorCode::EmptyOrSingleton,
                  "a curve needs at least 2 points, got " + std::to_string(points.size()) +
                      (label.empty() ? "" : " for " + label + "/" + sequence));
  }
  for (const RdPoint& p : points) {
    if (!(p.rate > 0.0) || !std::isfinite(p.rate)) {
      throw RdError(ErrorCode::NonPositiveRate, "rate must be positive and finite at point " + describe(p));
    }
    if (!std::isfinite(p.quality)) {
      throw RdError(ErrorCode::NonFiniteQuality, "quality must be finite at point " + describe(p));
    }
  }

  std::sort(points.begin(), points.end(),
            [](const RdPoint& a, const RdPoint& b) { return a.rate < b.rate; });
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].rate == points[i - 1].rate) {
      throw RdError(ErrorCode::DuplicateRate, "two points share rate " + describe(points[i]));
    }
  }

  if (policy == MonotonePolicy::drop_dominated) {
    // A point is dominated when some other point has lower rate and higher
    // quality. Keeping the running-max survivors yields a monotone curve.
    std::vector<RdPoint> kept;
    kept.reserve(points.size());
    double best_quality = -std::numeric_limits<double>::infinity();
    for (const RdPoint& p : points) {
      if (p.quality < best_quality) continue;
      best_quality = p.quality;
      kept.push_back(p);
    }
    points = std::move(kept);
    if (points.size() < 2) {
      throw RdError(ErrorCode::EmptyOrSingleton,
                    "fewer than 2 points remain after dropping dominated points" +
                        (label.empty() ? std::string() : " for " + label + "/" + sequence));
    }
  } else {
    for (std::size_t i = 1; i < points.size(); ++i) {
      if (points[i].quality < points[i - 1].quality) {
        throw RdError(ErrorCode::NonMonotoneQuality,
                      "quality decreases with rate at point " + describe(points[i]));
      }
    }
  }

  RdCurve curve;
  curve.points_ = std::move(points);
  curve.unit_ = unit;
  curve.label_ = std::move(label);
  curve.sequence_ = std::move(sequence);
  return curve;
}

RdCurve RdCurve::scaled_rates(double k) const {
  if (!(k > 0.0)) throw RdError(ErrorCode::InvalidParameter, "rate scale must be positive");
  std::vector<RdPoint> pts = points_;
  for (RdPoint& p : pts) p.rate *= k;
  return validate(std::move(pts), unit_, label_, sequence_);
}

RdCurve RdCurve::shifted_quality(double c) const {
  std::vector<RdPoint> pts = points_;
  for (RdPoint& p : pts) p.quality += c;
  return validate(std::move(pts), unit_, label_, sequence_);
}

EvaluationSet EvaluationSet::validate(std::vector<RdCurve> curves) {
  if (curves.empty()) throw RdError(ErrorCode::EmptyInput, "no curves supplied");

  EvaluationSet set;
  set.unit_ = curves.front().rate_unit();

  std::set<std::string> codec_names;
  std::set<std::string> sequence_names;
  for (RdCurve& curve : curves) {
    if (curve.rate_unit() != set.unit_) {
      throw RdError(ErrorCode::MixedUnits, "curve " + curve.label() + "/" + curve.sequence() +
                                               " uses " + std::string(to_string(curve.rate_unit())) +
                                               ", expected " + std::string(to_string(set.unit_)));
    }
    auto key = std::make_pair(curve.label(), curve.sequence());
    if (!set.curves_.emplace(key, std::move(curve)).second) {
      throw RdError(ErrorCode::DuplicateCell,
                    "more than one curve for (" + key.first + ", " + key.second + ")");
    }
    codec_names.insert(key.first);
    sequence_names.insert(key.second);
  }

  for (const std::string& codec : codec_names) {
    for (const std::string& sequence : sequence_names) {
      if (!set.curves_.count({codec, sequence})) {
        throw RdError(ErrorCode::MissingCell, "no curve for (" + codec + ", " + sequence + ")");
      }
    }
  }

  set.codecs_.assign(codec_names.begin(), codec_names.end());
  set.sequences_.assign(sequence_names.begin(), sequence_names.end());
  return set;
}

bool EvaluationSet::has_codec(const std::string& codec) const {
  return std::find(codecs_.begin(), codecs_.end(), codec) != codecs_.end();
}

const RdCurve& EvaluationSet::curve(const std::string& codec, const std::string& sequence) const {
  auto it = curves_.find({codec, sequence});
  if (it == curves_.end()) {
    throw RdError(ErrorCode::UnknownIdentifier, "no curve for (" + codec + ", " + sequence + ")");
  }
  return it->second;
}

EvaluationSet EvaluationSet::excluding(const std::string& sequence) const {
  if (std::find(sequences_.begin(), sequences_.end(), sequence) == sequences_.end()) {
    throw RdError(ErrorCode::UnknownIdentifier, "unknown sequence '" + sequence + "'");
  }
  std::vector<RdCurve> remaining;
  for (const auto& [key, curve] : curves_) {
    if (key.second != sequence) remaining.push_back(curve);
  }
  return validate(std::move(remaining));
}

std::vector<RdCurve> EvaluationSet::all_curves() const {
  std::vector<RdCurve> out;
  out.reserve(curves_.size());
  for (const auto& [key, curve] : curves_) out.push_back(curve);
  return out;
}

}  // namespace rdeval
