#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "rdeval/aggregation.hpp"
#include "rdeval/bd_metrics.hpp"
#include "rdeval/io_report.hpp"
#include "rdeval/rd_model.hpp"
#include "rdeval/synthetic.hpp"

namespace rdeval {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConflict = 1;
constexpr int kExitInputError = 2;
constexpr int kExitNoOverlap = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RdError(ErrorCode::IoError, "cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RdError(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw RdError(ErrorCode::IoError, "short write to '" + path + "'");
}

EvaluationSet load_set(const std::string& path, bool allow_nonmonotone, std::ostream& err) {
  const RdTable table = parse_rd_csv(read_file(path));
  std::vector<std::string> warnings;
  EvaluationSet set = to_evaluation_set(
      table, allow_nonmonotone ? MonotonePolicy::drop_dominated : MonotonePolicy::reject,
      &warnings);
  for (const std::string& warning : warnings) err << "warning: " << warning << "\n";
  return set;
}

void warn_undefined_sequences(const ComparisonReport& report, std::ostream& err) {
  for (const auto& [sequence, result] : report.per_sequence) {
    if (!result) {
      err << "warning: BD undefined for sequence '" << sequence
          << "' (no overlap); excluded from the mean\n";
    }
  }
}

std::string fixed2(double value) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << value;
  return os.str();
}

struct BdArgs {
  std::string file;
  std::string reference;
  std::string test;
  std::string sequence;
  std::string interpolator = "pchip";
  std::string metric = "rate";
  bool cubic_fallback = false;
  bool allow_nonmonotone = false;
};

int cmd_bd(const BdArgs& args, std::ostream& out, std::ostream& err) {
  const EvaluationSet set = load_set(args.file, args.allow_nonmonotone, err);
  const Interpolator interpolator = interpolator_from_string(args.interpolator);
  const Metric metric = metric_from_string(args.metric);

  std::string sequence = args.sequence;
  if (sequence.empty()) {
    if (set.sequences().size() != 1) {
      throw RdError(ErrorCode::InvalidParameter,
                    "file has " + std::to_string(set.sequences().size()) +
                        " sequences; pick one with --sequence");
    }
    sequence = set.sequences().front();
  }

  const RdCurve& reference = set.curve(args.reference, sequence);
  const RdCurve& test = set.curve(args.test, sequence);
  const BdResult result = metric == Metric::bd_rate
                              ? bd_rate(reference, test, interpolator, args.cubic_fallback)
                              : bd_psnr(reference, test, interpolator, args.cubic_fallback);

  if (result.metric == Metric::bd_rate) {
    out << "BD-rate (" << to_string(result.interpolator) << "): " << fixed2(result.value) << "%\n";
    out << "quality overlap: [" << format_number(result.overlap_low) << ", "
        << format_number(result.overlap_high) << "] dB\n";
  } else {
    out << "BD-PSNR (" << to_string(result.interpolator) << "): " << fixed2(result.value)
        << " dB\n";
    out << "log10-rate overlap: [" << format_number(result.overlap_low) << ", "
        << format_number(result.overlap_high) << "]\n";
  }
  if (result.fallback_fired) out << "note: cubic fit fell back to a non-4-point fit\n";
  return kExitOk;
}

struct CompareArgs {
  std::string file;
  std::string reference;
  std::string test;
  std::string interpolator = "pchip";
  std::string mode = "index";
  std::string format = "markdown";
  std::string plot_dir;
  double threshold = 2.0;
  bool loo = false;
  bool cubic_fallback = false;
  bool allow_nonmonotone = false;
};

int cmd_compare(const CompareArgs& args, std::ostream& out, std::ostream& err) {
  const EvaluationSet set = load_set(args.file, args.allow_nonmonotone, err);

  CompareOptions options;
  options.interpolator = interpolator_from_string(args.interpolator);
  options.averaging_mode = averaging_mode_from_string(args.mode);
  options.divergence_threshold = args.threshold;
  options.cubic_fallback = args.cubic_fallback;
  const ReportFormat format = report_format_from_string(args.format);

  if (args.loo) {
    const std::map<std::string, ComparisonReport> reports =
        leave_one_out(set, args.reference, args.test, options);
    out << emit_loo_reports(reports, format);
    bool conflict = false;
    for (const auto& [excluded, report] : reports) {
      warn_undefined_sequences(report, err);
      conflict = conflict || report.verdict != Verdict::consistent;
    }
    return conflict ? kExitConflict : kExitOk;
  }

  const ComparisonReport report = compare(set, args.reference, args.test, options);
  warn_undefined_sequences(report, err);
  out << emit_report(report, format);

  if (!args.plot_dir.empty()) {
    std::vector<AggregateCurve> aggregates;
    try {
      for (const std::string& codec : {args.reference, args.test}) {
        aggregates.push_back(average_curve_index_aligned(set, codec));
      }
    } catch (const RdError& e) {
      err << "warning: skipping average.csv: " << e.what() << "\n";
      aggregates.clear();
    }
    const auto written = emit_plot_data(set, aggregates, args.plot_dir);
    err << "wrote " << written.size() << " plot file(s) to " << args.plot_dir << "\n";
  }
  return report.verdict == Verdict::consistent ? kExitOk : kExitConflict;
}

struct SynthArgs {
  LinearScenario scenario;
  std::string interpolator;  // empty = cubic for n==4, pchip otherwise
  std::string emit_curves;
  double threshold = 2.0;
};

int cmd_synth(const SynthArgs& args, std::ostream& out, std::ostream& err) {
  const LinearScenario& s = args.scenario;
  s.check();
  const Interpolator interpolator =
      args.interpolator.empty()
          ? (s.n == 4 ? Interpolator::cubic_polyfit : Interpolator::pchip)
          : interpolator_from_string(args.interpolator);

  const ScenarioReport report = scenario_report(s, interpolator, args.threshold);

  out << "scenario: n=" << s.n << " r1=" << format_number(s.r1_start)
      << " p1=" << format_number(s.p1_start) << " db1=" << format_number(s.db1)
      << " dp1=" << format_number(s.dp1) << " r2=" << format_number(s.r2_start)
      << " p2=" << format_number(s.p2_start) << " db2=" << format_number(s.db2)
      << " dp2=" << format_number(s.dp2) << "\n";
  out << "equivalence condition dp2*db1 == dp1*db2: "
      << (report.condition.holds ? "holds" : "violated")
      << " (residual " << format_number(report.condition.residual) << ")\n";
  out << "average-line slopes: " << format_number(report.average_fit_codec1.slope) << " / "
      << format_number(report.average_fit_codec2.slope) << "\n";
  out << "intercept gap (codec-2 - codec-1): " << format_number(report.intercept_gap) << "\n";
  out << "per-sequence BD-rate (" << to_string(interpolator) << "):\n";
  for (const auto& [sequence, result] : report.comparison.per_sequence) {
    out << "  " << sequence << ": ";
    if (result) {
      out << fixed2(result->value) << "%\n";
    } else {
      out << "undefined (no overlap)\n";
    }
  }
  out << "mean of per-sequence BD-rates: " << fixed2(report.comparison.mean_of_metrics) << "%\n";
  out << "BD-rate on averaged curves: " << fixed2(report.comparison.metric_on_average) << "%\n";
  out << "verdict: " << to_string(report.comparison.verdict) << " (divergence "
      << fixed2(report.comparison.divergence) << " pp)\n";

  if (!args.emit_curves.empty()) {
    write_file(args.emit_curves, emit_rd_csv(to_rd_table(build_scenario(s))));
    err << "wrote scenario curves to " << args.emit_curves << "\n";
  }
  return report.comparison.verdict == Verdict::consistent ? kExitOk : kExitConflict;
}

struct SearchArgs {
  ParadoxSearchConfig config;
  std::string interpolator = "pchip";
  std::string out_path;
};

int cmd_search(const SearchArgs& args, std::ostream& out, std::ostream& err) {
  ParadoxSearchConfig config = args.config;
  config.interpolator = interpolator_from_string(args.interpolator);

  const std::vector<ParadoxInstance> instances = search_paradox(config);
  const std::string serialized = paradox_instances_to_json(config, instances);

  std::ostringstream summary;
  summary << "found " << instances.size() << " sign-conflict instance(s) in " << config.trials
          << " trial(s)\n";
  if (args.out_path.empty()) {
    out << serialized;
    err << summary.str();
  } else {
    write_file(args.out_path, serialized);
    out << summary.str();
    out << "wrote " << args.out_path << "\n";
  }
  return kExitOk;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rate-distortion codec comparison toolkit"};
  app.require_subcommand(1);

  BdArgs bd_args;
  CLI::App* bd = app.add_subcommand(
      "bd", "BD-rate or BD-PSNR between two codecs on one sequence");
  bd->add_option("curves", bd_args.file, "RD CSV file")->required();
  bd->add_option("--reference", bd_args.reference, "reference codec id")->required();
  bd->add_option("--test", bd_args.test, "test codec id")->required();
  bd->add_option("--sequence", bd_args.sequence, "sequence id (optional when unambiguous)");
  bd->add_option("--interpolator", bd_args.interpolator, "cubic|pchip")
      ->default_str("pchip");
  bd->add_option("--metric", bd_args.metric, "rate|psnr")->default_str("rate");
  bd->add_flag("--cubic-fallback", bd_args.cubic_fallback,
               "let the cubic fit degrade for point counts other than 4");
  bd->add_flag("--allow-nonmonotone", bd_args.allow_nonmonotone,
               "drop dominated points instead of rejecting the curve");

  CompareArgs compare_args;
  CLI::App* cmp = app.add_subcommand(
      "compare", "mean of per-sequence BD-rates vs BD-rate on averaged curves");
  cmp->add_option("curves", compare_args.file, "RD CSV file")->required();
  cmp->add_option("--reference", compare_args.reference, "reference codec id")->required();
  cmp->add_option("--test", compare_args.test, "test codec id")->required();
  cmp->add_option("--interpolator", compare_args.interpolator, "cubic|pchip")
      ->default_str("pchip");
  cmp->add_option("--mode", compare_args.mode, "averaging mode: index|grid")
      ->default_str("index");
  cmp->add_option("--threshold", compare_args.threshold,
                  "divergence threshold in percentage points");
  cmp->add_option("--format", compare_args.format, "json|markdown")->default_str("markdown");
  cmp->add_option("--plot-dir", compare_args.plot_dir,
                  "write per-sequence and average plot CSVs to this directory");
  cmp->add_flag("--loo", compare_args.loo, "one report per excluded sequence");
  cmp->add_flag("--cubic-fallback", compare_args.cubic_fallback,
                "let the cubic fit degrade for point counts other than 4");
  cmp->add_flag("--allow-nonmonotone", compare_args.allow_nonmonotone,
                "drop dominated points instead of rejecting curves");

  SynthArgs synth_args;
  CLI::App* synth = app.add_subcommand(
      "synth", "two-codec linear scenario with index-aligned averaging");
  synth->add_option("--n", synth_args.scenario.n, "points per codec per video");
  synth->add_option("--r1", synth_args.scenario.r1_start, "video-1 rate anchor");
  synth->add_option("--p1", synth_args.scenario.p1_start, "video-1 quality anchor (dB)");
  synth->add_option("--db1", synth_args.scenario.db1, "video-1 rate increment");
  synth->add_option("--dp1", synth_args.scenario.dp1, "video-1 quality increment");
  synth->add_option("--r2", synth_args.scenario.r2_start, "video-2 rate anchor");
  synth->add_option("--p2", synth_args.scenario.p2_start, "video-2 quality anchor (dB)");
  synth->add_option("--db2", synth_args.scenario.db2, "video-2 rate increment");
  synth->add_option("--dp2", synth_args.scenario.dp2, "video-2 quality increment");
  synth->add_option("--interpolator", synth_args.interpolator,
                    "cubic|pchip (default: cubic when n=4, else pchip)");
  synth->add_option("--threshold", synth_args.threshold,
                    "divergence threshold in percentage points");
  synth->add_option("--emit-curves", synth_args.emit_curves,
                    "also write the generated curves as an RD CSV");

  SearchArgs search_args;
  CLI::App* search = app.add_subcommand(
      "search", "randomized search for methodology sign conflicts");
  search->add_option("--sequences", search_args.config.num_sequences, "sequences per trial");
  search->add_option("--points", search_args.config.points_per_curve, "points per curve");
  search->add_option("--trials", search_args.config.trials, "number of trials");
  search->add_option("--seed", search_args.config.seed, "generator seed");
  search->add_option("--rate-lo", search_args.config.rate_range.first, "rate range low end");
  search->add_option("--rate-hi", search_args.config.rate_range.second, "rate range high end");
  search->add_option("--psnr-lo", search_args.config.psnr_range.first, "PSNR range low end (dB)");
  search->add_option("--psnr-hi", search_args.config.psnr_range.second, "PSNR range high end (dB)");
  search->add_option("--interpolator", search_args.interpolator, "cubic|pchip")
      ->default_str("pchip");
  search->add_option("--out", search_args.out_path, "output JSON path (stdout when omitted)");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    if (bd->parsed()) return cmd_bd(bd_args, out, err);
    if (cmp->parsed()) return cmd_compare(compare_args, out, err);
    if (synth->parsed()) return cmd_synth(synth_args, out, err);
    if (search->parsed()) return cmd_search(search_args, out, err);
  } catch (const RdError& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::NoOverlap ? kExitNoOverlap : kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  err << "error: no subcommand given\n";
  return kExitInputError;
}

}  // namespace rdeval
