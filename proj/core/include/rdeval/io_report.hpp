#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rdeval/aggregation.hpp"
#include "rdeval/rd_model.hpp"
#include "rdeval/synthetic.hpp"

namespace rdeval {

enum class ReportFormat { json, markdown };

ReportFormat report_format_from_string(std::string_view s);

/// Flat ingest table: one row per operating point.
struct RdTableRow {
  std::string codec;
  std::string sequence;
  double rate = 0.0;
  double quality = 0.0;

  friend bool operator==(const RdTableRow&, const RdTableRow&) = default;
};

struct RdTable {
  std::vector<RdTableRow> rows;
  RateUnit rate_unit = RateUnit::bpp;

  friend bool operator==(const RdTable&, const RdTable&) = default;
};

/// Parses the RD CSV format: optional first line `# rate_unit=bpp|kbps`
/// (default bpp), header `codec,sequence,rate,psnr`, one row per point.
/// Errors carry 1-based line numbers.
RdTable parse_rd_csv(std::string_view text);

/// Inverse of parse_rd_csv. Rows are emitted in (codec, sequence, rate)
/// order with up to 9 significant digits, so emit/parse is a fixpoint.
std::string emit_rd_csv(const RdTable& table);

RdTable to_rd_table(const EvaluationSet& set);

/// Groups table rows into validated curves and a validated set.
/// With drop_dominated, quality drops are repaired instead of rejected and a
/// note per dropped point is appended to *warnings.
EvaluationSet to_evaluation_set(const RdTable& table,
                                MonotonePolicy policy = MonotonePolicy::reject,
                                std::vector<std::string>* warnings = nullptr);

/// Renders a comparison report. JSON has top-level keys settings,
/// per_sequence, mean_of_metrics, metric_on_average, verdict, divergence;
/// markdown renders one column per sequence, the two aggregate columns, and
/// the verdict below the table. Numbers in markdown carry 2 decimals.
std::string emit_report(const ComparisonReport& report, ReportFormat format);

/// Parses emit_report's JSON output back; parse(emit(r)) == r.
ComparisonReport parse_report_json(std::string_view text);

/// Renders one report per excluded sequence (leave-one-out output), keyed
/// and ordered by the excluded name.
std::string emit_loo_reports(const std::map<std::string, ComparisonReport>& by_excluded,
                             ReportFormat format);

/// JSON for an evaluation set (used by paradox instances).
std::string evaluation_set_to_json(const EvaluationSet& set);
EvaluationSet evaluation_set_from_json(std::string_view text);

/// Serialized paradox search output: config echo plus one entry per
/// instance, each embedding the full set and report.
std::string paradox_instances_to_json(const ParadoxSearchConfig& config,
                                      const std::vector<ParadoxInstance>& instances);
std::vector<ParadoxInstance> paradox_instances_from_json(std::string_view text);

/// Writes one `<sequence>.csv` per sequence (columns codec,rate,psnr, rows
/// ordered by codec then rate) plus `average.csv` for the aggregates.
/// Returns the paths written, in write order.
std::vector<std::filesystem::path> emit_plot_data(const EvaluationSet& set,
                                                  const std::vector<AggregateCurve>& aggregates,
                                                  const std::filesystem::path& dir);

/// Number formatting shared by every emitter: shortest form with up to
/// `significant` digits, locale-independent.
std::string format_number(double value, int significant = 9);

}  // namespace rdeval
