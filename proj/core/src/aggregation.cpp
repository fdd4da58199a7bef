#include "rdeval/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rdeval/interpolation.hpp"

namespace rdeval {

namespace {

void require_codec(const EvaluationSet& set, const std::string& codec) {
  if (!set.has_codec(codec)) {
    throw RdError(ErrorCode::UnknownIdentifier, "codec '" + codec + "' not in evaluation set");
  }
}

// Uniform quality grid over the span every curve of both codecs can serve,
// with as many points as the largest curve.
std::vector<double> derive_quality_grid(const EvaluationSet& set, const std::string& reference,
                                        const std::string& test) {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  std::string lo_seq, hi_seq;
  std::size_t knot_count = 0;
  for (const std::string& codec : {reference, test}) {
    for (const std::string& sequence : set.sequences()) {
      const RdCurve& curve = set.curve(codec, sequence);
      if (curve.min_quality() > lo) {
        lo = curve.min_quality();
        lo_seq = sequence;
      }
      if (curve.max_quality() < hi) {
        hi = curve.max_quality();
        hi_seq = sequence;
      }
      knot_count = std::max(knot_count, curve.size());
    }
  }
  if (!(hi - lo >= 0.01)) {
    std::ostringstream os;
    os << "no common quality span: '" << lo_seq << "' starts at " << lo << " dB but '" << hi_seq
       << "' ends at " << hi << " dB";
    throw RdError(ErrorCode::GridOutsideSpan, os.str());
  }
  std::vector<double> grid(knot_count);
  for (std::size_t i = 0; i < knot_count; ++i) {
    // the last grid point is hi itself, never a rounded-up neighbour
    grid[i] = i + 1 == knot_count
                  ? hi
                  : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(knot_count - 1);
  }
  return grid;
}

BdResult aggregate_bd(const EvaluationSet& set, const std::string& reference,
                      const std::string& test, const CompareOptions& options) {
  auto aggregate = [&](const std::string& codec) {
    if (options.averaging_mode == AveragingMode::index_aligned) {
      return average_curve_index_aligned(set, codec);
    }
    const std::vector<double> grid = options.quality_grid
                                         ? *options.quality_grid
                                         : derive_quality_grid(set, reference, test);
    return average_curve_quality_grid(set, codec, grid, options.interpolator);
  };
  const AggregateCurve ref_avg = aggregate(reference);
  const AggregateCurve test_avg = aggregate(test);
  return bd_rate(ref_avg.curve, test_avg.curve, options.interpolator, options.cubic_fallback);
}

}  // namespace

std::string_view to_string(AveragingMode mode) {
  return mode == AveragingMode::index_aligned ? "index_aligned" : "quality_grid";
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::consistent: return "consistent";
    case Verdict::sign_conflict: return "sign_conflict";
    case Verdict::magnitude_divergence: return "magnitude_divergence";
  }
  return "unknown";
}

AveragingMode averaging_mode_from_string(std::string_view s) {
  if (s == "index_aligned" || s == "index") return AveragingMode::index_aligned;
  if (s == "quality_grid" || s == "grid") return AveragingMode::quality_grid;
  throw RdError(ErrorCode::InvalidParameter,
                "averaging mode must be index or grid, got '" + std::string(s) + "'");
}

Verdict verdict_from_string(std::string_view s) {
  if (s == "consistent") return Verdict::consistent;
  if (s == "sign_conflict") return Verdict::sign_conflict;
  if (s == "magnitude_divergence") return Verdict::magnitude_divergence;
  throw RdError(ErrorCode::InvalidParameter, "unknown verdict '" + std::string(s) + "'");
}

AggregateCurve average_curve_index_aligned(const EvaluationSet& set, const std::string& codec) {
  require_codec(set, codec);
  const std::vector<std::string>& sequences = set.sequences();

  const std::size_t count = set.curve(codec, sequences.front()).size();
  for (const std::string& sequence : sequences) {
    const std::size_t have = set.curve(codec, sequence).size();
    if (have != count) {
      throw RdError(ErrorCode::RaggedPointCounts,
                    "index alignment undefined: '" + sequences.front() + "' has " +
                        std::to_string(count) + " points but '" + sequence + "' has " +
                        std::to_string(have));
    }
  }

  std::vector<RdPoint> points(count);
  for (std::size_t i = 0; i < count; ++i) {
    double rate_sum = 0.0;
    double quality_sum = 0.0;
    for (const std::string& sequence : sequences) {
      const RdPoint& p = set.curve(codec, sequence).points()[i];
      rate_sum += p.rate;
      quality_sum += p.quality;
    }
    points[i] = {rate_sum / static_cast<double>(sequences.size()),
                 quality_sum / static_cast<double>(sequences.size())};
  }

  return AggregateCurve{RdCurve::validate(std::move(points), set.rate_unit(), codec, "average"),
                        AveragingMode::index_aligned, sequences};
}

AggregateCurve average_curve_quality_grid(const EvaluationSet& set, const std::string& codec,
                                          std::span<const double> grid, Interpolator interpolator) {
  require_codec(set, codec);
  if (grid.size() < 2) {
    throw RdError(ErrorCode::InvalidParameter, "quality grid needs at least 2 values");
  }

  const std::vector<std::string>& sequences = set.sequences();
  std::vector<FittedCurve> fits;
  fits.reserve(sequences.size());
  for (const std::string& sequence : sequences) {
    const RdCurve& curve = set.curve(codec, sequence);
    for (double q : grid) {
      if (q < curve.min_quality() || q > curve.max_quality()) {
        std::ostringstream os;
        os << "grid quality " << q << " dB outside span [" << curve.min_quality() << ", "
           << curve.max_quality() << "] of sequence '" << sequence << "'";
        throw RdError(ErrorCode::GridOutsideSpan, os.str());
      }
    }
    const std::vector<Knot> knots = to_fit_domain(curve, FitDomain::quality_to_lograte);
    fits.push_back(interpolator == Interpolator::cubic_polyfit ? fit_cubic_polyfit(knots, true)
                                                               : fit_pchip(knots));
  }

  std::vector<RdPoint> points;
  points.reserve(grid.size());
  for (double q : grid) {
    double rate_sum = 0.0;
    for (const FittedCurve& fit : fits) rate_sum += std::pow(10.0, fit.evaluate(q));
    points.push_back({rate_sum / static_cast<double>(fits.size()), q});
  }

  return AggregateCurve{RdCurve::validate(std::move(points), set.rate_unit(), codec, "average"),
                        AveragingMode::quality_grid, sequences};
}

double mean_of_metrics(const std::map<std::string, BdResult>& per_sequence) {
  if (per_sequence.empty()) {
    throw RdError(ErrorCode::EmptyInput, "no per-sequence results to average");
  }
  const Metric metric = per_sequence.begin()->second.metric;
  double sum = 0.0;
  for (const auto& [sequence, result] : per_sequence) {
    if (result.metric != metric) {
      throw RdError(ErrorCode::MixedMetricKinds,
                    "sequence '" + sequence + "' carries " + std::string(to_string(result.metric)) +
                        ", expected " + std::string(to_string(metric)));
    }
    sum += result.value;
  }
  return sum / static_cast<double>(per_sequence.size());
}

Verdict classify_verdict(double mean_of_metrics, double metric_on_average, double threshold) {
  const bool opposite = (mean_of_metrics > 0.0 && metric_on_average < 0.0) ||
                        (mean_of_metrics < 0.0 && metric_on_average > 0.0);
  if (opposite) return Verdict::sign_conflict;
  if (std::abs(mean_of_metrics - metric_on_average) > threshold) {
    return Verdict::magnitude_divergence;
  }
  return Verdict::consistent;
}

ComparisonReport compare(const EvaluationSet& set, const std::string& reference,
                         const std::string& test, const CompareOptions& options) {
  require_codec(set, reference);
  require_codec(set, test);

  ComparisonReport report;
  report.settings = {reference,          test,
                     options.interpolator, options.averaging_mode,
                     options.divergence_threshold, options.cubic_fallback};

  std::map<std::string, BdResult> defined;
  for (const std::string& sequence : set.sequences()) {
    try {
      BdResult result = bd_rate(set.curve(reference, sequence), set.curve(test, sequence),
                                options.interpolator, options.cubic_fallback);
      defined.emplace(sequence, result);
      report.per_sequence.emplace(sequence, result);
    } catch (const RdError& e) {
      if (e.code() != ErrorCode::NoOverlap) throw;
      report.per_sequence.emplace(sequence, std::nullopt);
    }
  }

  report.mean_of_metrics = mean_of_metrics(defined);
  report.metric_on_average = aggregate_bd(set, reference, test, options).value;
  report.divergence = std::abs(report.mean_of_metrics - report.metric_on_average);
  report.verdict =
      classify_verdict(report.mean_of_metrics, report.metric_on_average, options.divergence_threshold);
  return report;
}

std::map<std::string, ComparisonReport> leave_one_out(const EvaluationSet& set,
                                                      const std::string& reference,
                                                      const std::string& test,
                                                      const CompareOptions& options) {
  if (set.sequences().size() < 2) {
    throw RdError(ErrorCode::InvalidParameter, "leave-one-out needs at least 2 sequences");
  }
  std::map<std::string, ComparisonReport> reports;
  for (const std::string& excluded : set.sequences()) {
    reports.emplace(excluded, compare(set.excluding(excluded), reference, test, options));
  }
  return reports;
}

}  // namespace rdeval
