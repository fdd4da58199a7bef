#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rdeval/bd_metrics.hpp"
#include "rdeval/rd_model.hpp"

namespace rdeval {

enum class AveragingMode { index_aligned, quality_grid };
enum class Verdict { consistent, sign_conflict, magnitude_divergence };

std::string_view to_string(AveragingMode mode);
std::string_view to_string(Verdict verdict);
AveragingMode averaging_mode_from_string(std::string_view s);
Verdict verdict_from_string(std::string_view s);

/// One codec's curves collapsed across sequences into a single curve.
struct AggregateCurve {
  RdCurve curve;
  AveragingMode mode = AveragingMode::index_aligned;
  std::vector<std::string> source_sequences;

  friend bool operator==(const AggregateCurve&, const AggregateCurve&) = default;
};

struct CompareSettings {
  std::string reference;
  std::string test;
  Interpolator interpolator = Interpolator::pchip;
  AveragingMode averaging_mode = AveragingMode::index_aligned;
  double divergence_threshold = 2.0;  ///< percentage points
  bool cubic_fallback = false;

  friend bool operator==(const CompareSettings&, const CompareSettings&) = default;
};

/// Side-by-side result of the two test-set methodologies. A per_sequence
/// entry is nullopt when BD is undefined for that sequence (no overlap);
/// such sequences are excluded from mean_of_metrics.
struct ComparisonReport {
  CompareSettings settings;
  std::map<std::string, std::optional<BdResult>> per_sequence;
  double mean_of_metrics = 0.0;
  double metric_on_average = 0.0;
  Verdict verdict = Verdict::consistent;
  double divergence = 0.0;  ///< |mean_of_metrics - metric_on_average|

  friend bool operator==(const ComparisonReport&, const ComparisonReport&) = default;
};

/// Averages the i-th operating point across sequences, treating the set as a
/// single input sequence. All of the codec's curves must have the same point
/// count (RaggedPointCounts otherwise).
AggregateCurve average_curve_index_aligned(const EvaluationSet& set, const std::string& codec);

/// Averages fitted rates at fixed quality values instead. Every grid quality
/// must lie inside every sequence's quality span for this codec;
/// GridOutsideSpan names the first sequence that cannot serve a grid point.
AggregateCurve average_curve_quality_grid(const EvaluationSet& set, const std::string& codec,
                                          std::span<const double> grid,
                                          Interpolator interpolator = Interpolator::pchip);

/// Unweighted arithmetic mean of per-sequence BD values.
double mean_of_metrics(const std::map<std::string, BdResult>& per_sequence);

Verdict classify_verdict(double mean_of_metrics, double metric_on_average, double threshold);

struct CompareOptions {
  Interpolator interpolator = Interpolator::pchip;
  AveragingMode averaging_mode = AveragingMode::index_aligned;
  double divergence_threshold = 2.0;
  bool cubic_fallback = false;
  /// Explicit grid for quality_grid mode; derived from the common quality
  /// span (point count = largest curve) when absent.
  std::optional<std::vector<double>> quality_grid;
};

/// Runs both methodologies for one codec pair and classifies the verdict.
ComparisonReport compare(const EvaluationSet& set, const std::string& reference,
                         const std::string& test, const CompareOptions& options = {});

/// One ComparisonReport per excluded sequence, keyed by the excluded name.
std::map<std::string, ComparisonReport> leave_one_out(const EvaluationSet& set,
                                                      const std::string& reference,
                                                      const std::string& test,
                                                      const CompareOptions& options = {});

}  // namespace rdeval
