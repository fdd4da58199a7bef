#include "rdeval/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace rdeval {

namespace {

constexpr const char* kCodec1 = "codec-1";
constexpr const char* kCodec2 = "codec-2";
constexpr const char* kVideo1 = "video-1";
constexpr const char* kVideo2 = "video-2";

std::vector<RdPoint> line_points(double rate_start, double quality_start, double rate_step,
                                 double quality_step, int first_index, int count) {
  std::vector<RdPoint> points;
  points.reserve(static_cast<std::size_t>(count));
  for (int i = first_index; i < first_index + count; ++i) {
    points.push_back({rate_start + i * rate_step, quality_start + i * quality_step});
  }
  return points;
}

// Deterministic uniform variates independent of the standard library's
// distribution implementations, so serialized search output is bit-identical
// across platforms.
class UniformSource {
public:
  UniformSource(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
  }

  double u01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }
  double log_uniform(double lo, double hi) {
    return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * u01());
  }

private:
  std::mt19937_64 engine_;
};

RdCurve random_band_curve(UniformSource& rng, int point_count, double rate_lo, double rate_hi,
                          double quality_lo, double quality_hi, const std::string& codec,
                          const std::string& sequence) {
  std::vector<double> rates(static_cast<std::size_t>(point_count));
  do {
    for (double& r : rates) r = rng.log_uniform(rate_lo, rate_hi);
    std::sort(rates.begin(), rates.end());
  } while (std::adjacent_find(rates.begin(), rates.end()) != rates.end());

  const double height = quality_hi - quality_lo;
  const double anchor = quality_lo + height * (0.05 + 0.25 * rng.u01());
  const double budget = (quality_hi - 0.05 * height - anchor) * (0.4 + 0.6 * rng.u01());

  std::vector<double> raw(static_cast<std::size_t>(point_count) - 1);
  double raw_sum = 0.0;
  for (double& u : raw) {
    u = 0.1 + rng.u01();
    raw_sum += u;
  }

  std::vector<RdPoint> points(static_cast<std::size_t>(point_count));
  double quality = anchor;
  points[0] = {rates[0], quality};
  for (std::size_t i = 1; i < points.size(); ++i) {
    quality += raw[i - 1] / raw_sum * budget;
    points[i] = {rates[i], quality};
  }
  return RdCurve::validate(std::move(points), RateUnit::bpp, codec, sequence);
}

}  // namespace

void LinearScenario::check() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw RdError(ErrorCode::InvalidParameter, std::string(name) + " must be positive and finite");
    }
  };
  positive(db1, "db1");
  positive(dp1, "dp1");
  positive(db2, "db2");
  positive(dp2, "dp2");
  positive(r1_start, "r1_start");
  positive(r2_start, "r2_start");
  if (n < 2) throw RdError(ErrorCode::InvalidParameter, "n must be at least 2");
  if (!std::isfinite(p1_start) || !std::isfinite(p2_start)) {
    throw RdError(ErrorCode::InvalidParameter, "quality anchors must be finite");
  }
}

LineFit fit_line(std::span<const RdPoint> points) {
  if (points.size() < 2) {
    throw RdError(ErrorCode::InvalidParameter, "line fit needs at least 2 points");
  }
  const double n = static_cast<double>(points.size());
  double mean_r = 0.0;
  double mean_p = 0.0;
  for (const RdPoint& pt : points) {
    mean_r += pt.rate;
    mean_p += pt.quality;
  }
  mean_r /= n;
  mean_p /= n;

  double srr = 0.0;
  double srp = 0.0;
  for (const RdPoint& pt : points) {
    srr += (pt.rate - mean_r) * (pt.rate - mean_r);
    srp += (pt.rate - mean_r) * (pt.quality - mean_p);
  }
  const double slope = srp / srr;
  return {slope, mean_p - slope * mean_r};
}

EvaluationSet build_scenario(const LinearScenario& s) {
  s.check();

  // Video-1: both codecs produce exactly the same points.
  std::vector<RdPoint> video1 = line_points(s.r1_start, s.p1_start, s.db1, s.dp1, 0, s.n);
  // Video-2: codec-2 sits on the same line, shifted up by one rate step.
  std::vector<RdPoint> video2_c1 = line_points(s.r2_start, s.p2_start, s.db2, s.dp2, 0, s.n);
  std::vector<RdPoint> video2_c2 = line_points(s.r2_start, s.p2_start, s.db2, s.dp2, 1, s.n);

  std::vector<RdCurve> curves;
  curves.push_back(RdCurve::validate(video1, RateUnit::bpp, kCodec1, kVideo1));
  curves.push_back(RdCurve::validate(std::move(video1), RateUnit::bpp, kCodec2, kVideo1));
  curves.push_back(RdCurve::validate(std::move(video2_c1), RateUnit::bpp, kCodec1, kVideo2));
  curves.push_back(RdCurve::validate(std::move(video2_c2), RateUnit::bpp, kCodec2, kVideo2));
  return EvaluationSet::validate(std::move(curves));
}

EquivalenceCheck equivalence_condition(const LinearScenario& s) {
  s.check();
  const double residual = s.dp2 * s.db1 - s.dp1 * s.db2;
  return {std::abs(residual) < 1e-12, residual};
}

std::pair<LineFit, LineFit> average_line_fits(const LinearScenario& s) {
  const EvaluationSet set = build_scenario(s);
  const AggregateCurve avg1 = average_curve_index_aligned(set, kCodec1);
  const AggregateCurve avg2 = average_curve_index_aligned(set, kCodec2);

  const double slope1 = fit_line(avg1.curve.points()).slope;
  const double slope2 = fit_line(avg2.curve.points()).slope;

  // Intercepts anchored at each codec's first average point.
  const RdPoint& first1 = avg1.curve.points().front();
  const RdPoint& first2 = avg2.curve.points().front();
  return {LineFit{slope1, first1.quality - slope1 * first1.rate},
          LineFit{slope2, first2.quality - slope2 * first2.rate}};
}

ScenarioReport scenario_report(const LinearScenario& s, Interpolator interpolator,
                               double divergence_threshold) {
  const EvaluationSet set = build_scenario(s);

  CompareOptions options;
  options.interpolator = interpolator;
  options.divergence_threshold = divergence_threshold;

  ScenarioReport report;
  report.comparison = compare(set, kCodec1, kCodec2, options);
  report.condition = equivalence_condition(s);
  std::tie(report.average_fit_codec1, report.average_fit_codec2) = average_line_fits(s);
  report.intercept_gap = report.average_fit_codec2.intercept - report.average_fit_codec1.intercept;
  return report;
}

std::vector<ParadoxInstance> search_paradox(const ParadoxSearchConfig& config) {
  if (config.trials < 1) throw RdError(ErrorCode::InvalidParameter, "trials must be >= 1");
  if (config.num_sequences < 1) {
    throw RdError(ErrorCode::InvalidParameter, "num_sequences must be >= 1");
  }
  if (config.points_per_curve < 2) {
    throw RdError(ErrorCode::InvalidParameter, "points_per_curve must be >= 2");
  }
  if (!(config.rate_range.first > 0.0) || !(config.rate_range.second > config.rate_range.first)) {
    throw RdError(ErrorCode::InvalidParameter, "rate_range must satisfy 0 < lo < hi");
  }
  if (!(config.psnr_range.second > config.psnr_range.first)) {
    throw RdError(ErrorCode::InvalidParameter, "psnr_range must satisfy lo < hi");
  }

  const int sequences = config.num_sequences;
  const double log_rate_lo = std::log(config.rate_range.first);
  const double log_rate_span = std::log(config.rate_range.second) - log_rate_lo;
  const double psnr_lo = config.psnr_range.first;
  const double psnr_span = config.psnr_range.second - psnr_lo;

  CompareOptions options;
  options.interpolator = config.interpolator;
  options.divergence_threshold = config.divergence_threshold;

  std::vector<ParadoxInstance> instances;
  for (int trial = 0; trial < config.trials; ++trial) {
    UniformSource rng(config.seed, static_cast<std::uint64_t>(trial));

    // Each sequence lives in its own rate and quality band, mirroring test
    // sets whose sequences occupy disjoint operating ranges.
    std::vector<RdCurve> curves;
    curves.reserve(2 * static_cast<std::size_t>(sequences));
    for (int j = 0; j < sequences; ++j) {
      const double rate_lo = std::exp(log_rate_lo + log_rate_span * j / sequences);
      const double rate_hi = std::exp(log_rate_lo + log_rate_span * (j + 1) / sequences);
      const double quality_lo = psnr_lo + psnr_span * j / sequences;
      const double quality_hi = psnr_lo + psnr_span * (j + 1) / sequences;
      const std::string sequence = "seq-" + std::string(1, static_cast<char>('a' + j));
      for (const char* codec : {kCodec1, kCodec2}) {
        curves.push_back(random_band_curve(rng, config.points_per_curve, rate_lo, rate_hi,
                                           quality_lo, quality_hi, codec, sequence));
      }
    }

    try {
      EvaluationSet set = EvaluationSet::validate(std::move(curves));
      ComparisonReport report = compare(set, kCodec1, kCodec2, options);
      const bool conflict = (report.mean_of_metrics > 0.0 && report.metric_on_average < 0.0) ||
                            (report.mean_of_metrics < 0.0 && report.metric_on_average > 0.0);
      if (conflict) instances.push_back({trial, std::move(set), std::move(report)});
    } catch (const RdError&) {
      // Trials whose bands produce no usable overlap are simply not instances.
      continue;
    }
  }
  return instances;
}

}  // namespace rdeval
