#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rdeval/aggregation.hpp"
#include "rdeval/rd_model.hpp"

namespace rdeval {

/// Two codecs with linear RD curves on two videos. Video-1 is identical for
/// both codecs; on video-2 the second codec's points are the same line
/// shifted up by one rate step. All increments are strictly positive.
struct LinearScenario {
  double r1_start = 1.0;   ///< video-1 rate anchor
  double p1_start = 40.0;  ///< video-1 quality anchor (dB)
  double db1 = 1.0;        ///< video-1 rate increment
  double dp1 = 1.0;        ///< video-1 quality increment
  double r2_start = 1.0;   ///< video-2 rate anchor
  double p2_start = 30.0;  ///< video-2 quality anchor (dB)
  double db2 = 2.0;        ///< video-2 rate increment
  double dp2 = 1.0;        ///< video-2 quality increment
  int n = 4;               ///< points per codec per video, >= 2

  /// InvalidParameter unless all increments > 0, n >= 2 and anchors give
  /// positive rates.
  void check() const;

  friend bool operator==(const LinearScenario&, const LinearScenario&) = default;
};

/// P = slope * R + intercept.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;

  friend bool operator==(const LineFit&, const LineFit&) = default;
};

struct EquivalenceCheck {
  bool holds = false;
  double residual = 0.0;  ///< dp2*db1 - dp1*db2

  friend bool operator==(const EquivalenceCheck&, const EquivalenceCheck&) = default;
};

struct ScenarioReport {
  ComparisonReport comparison;
  EquivalenceCheck condition;
  LineFit average_fit_codec1;
  LineFit average_fit_codec2;
  double intercept_gap = 0.0;  ///< codec-2 intercept minus codec-1 intercept
};

/// Least-squares line through collinear-by-construction points.
LineFit fit_line(std::span<const RdPoint> points);

/// Materializes the scenario as a 2-codec x 2-sequence evaluation set
/// (codecs "codec-1"/"codec-2", sequences "video-1"/"video-2").
EvaluationSet build_scenario(const LinearScenario& scenario);

/// The condition under which the two average RD curves coincide:
/// dp2*db1 == dp1*db2 (equal per-video slopes).
EquivalenceCheck equivalence_condition(const LinearScenario& scenario);

/// Exact line fits through each codec's index-aligned average points.
/// Both slopes equal (dp1+dp2)/(db1+db2); intercepts are anchored at each
/// codec's first average point.
std::pair<LineFit, LineFit> average_line_fits(const LinearScenario& scenario);

/// compare() on the built scenario plus the analytic intercept gap.
ScenarioReport scenario_report(const LinearScenario& scenario,
                               Interpolator interpolator = Interpolator::cubic_polyfit,
                               double divergence_threshold = 2.0);

struct ParadoxSearchConfig {
  int num_sequences = 2;
  int points_per_curve = 4;
  std::pair<double, double> rate_range{0.05, 4.0};
  std::pair<double, double> psnr_range{30.0, 44.0};
  int trials = 10000;
  std::uint64_t seed = 42;
  Interpolator interpolator = Interpolator::pchip;
  double divergence_threshold = 2.0;
};

/// A dataset where the two methodologies disagree in sign. Embeds the full
/// inputs so the instance can be re-verified independently of the generator.
struct ParadoxInstance {
  int trial = 0;
  EvaluationSet set;
  ComparisonReport report;
};

/// Randomized search for sign conflicts between mean-of-metrics and
/// metric-on-averaged-curve. Each sequence draws its curves from its own
/// rate/quality band (disjoint operating ranges across sequences). The
/// per-trial generator state derives from (seed, trial) only, so results are
/// deterministic and independent of execution order. An empty result is a
/// valid outcome.
std::vector<ParadoxInstance> search_paradox(const ParadoxSearchConfig& config);

}  // namespace rdeval
