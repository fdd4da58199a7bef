#include "rdeval/io_report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include <json.hpp>

namespace rdeval {

namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

double parse_double(std::string_view field, std::size_t line_number, const char* what) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || field.empty()) {
    throw RdError(ErrorCode::NonNumericField, "line " + std::to_string(line_number) + ": " + what +
                                                  " field '" + std::string(field) +
                                                  "' is not a number");
  }
  return value;
}

json bd_result_to_json(const BdResult& r) {
  return json{{"value", r.value},
              {"metric", to_string(r.metric)},
              {"overlap_low", r.overlap_low},
              {"overlap_high", r.overlap_high},
              {"interpolator", to_string(r.interpolator)},
              {"fallback_fired", r.fallback_fired}};
}

BdResult bd_result_from_json(const json& j) {
  BdResult r;
  r.value = j.at("value").get<double>();
  r.metric = metric_from_string(j.at("metric").get<std::string>());
  r.overlap_low = j.at("overlap_low").get<double>();
  r.overlap_high = j.at("overlap_high").get<double>();
  r.interpolator = interpolator_from_string(j.at("interpolator").get<std::string>());
  r.fallback_fired = j.at("fallback_fired").get<bool>();
  return r;
}

json report_to_json(const ComparisonReport& report) {
  json per_sequence = json::object();
  for (const auto& [sequence, result] : report.per_sequence) {
    per_sequence[sequence] = result ? bd_result_to_json(*result) : json(nullptr);
  }
  return json{{"settings",
               {{"reference", report.settings.reference},
                {"test", report.settings.test},
                {"interpolator", to_string(report.settings.interpolator)},
                {"averaging_mode", to_string(report.settings.averaging_mode)},
                {"divergence_threshold", report.settings.divergence_threshold},
                {"cubic_fallback", report.settings.cubic_fallback}}},
              {"per_sequence", per_sequence},
              {"mean_of_metrics", report.mean_of_metrics},
              {"metric_on_average", report.metric_on_average},
              {"verdict", to_string(report.verdict)},
              {"divergence", report.divergence}};
}

ComparisonReport report_from_json(const json& j) {
  ComparisonReport report;
  const json& settings = j.at("settings");
  report.settings.reference = settings.at("reference").get<std::string>();
  report.settings.test = settings.at("test").get<std::string>();
  report.settings.interpolator =
      interpolator_from_string(settings.at("interpolator").get<std::string>());
  report.settings.averaging_mode =
      averaging_mode_from_string(settings.at("averaging_mode").get<std::string>());
  report.settings.divergence_threshold = settings.at("divergence_threshold").get<double>();
  report.settings.cubic_fallback = settings.at("cubic_fallback").get<bool>();

  for (const auto& [sequence, value] : j.at("per_sequence").items()) {
    if (value.is_null()) {
      report.per_sequence.emplace(sequence, std::nullopt);
    } else {
      report.per_sequence.emplace(sequence, bd_result_from_json(value));
    }
  }
  report.mean_of_metrics = j.at("mean_of_metrics").get<double>();
  report.metric_on_average = j.at("metric_on_average").get<double>();
  report.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  report.divergence = j.at("divergence").get<double>();
  return report;
}

json set_to_json(const EvaluationSet& set) {
  json curves = json::array();
  for (const RdCurve& curve : set.all_curves()) {
    json points = json::array();
    for (const RdPoint& p : curve.points()) {
      points.push_back(json{{"rate", p.rate}, {"psnr", p.quality}});
    }
    curves.push_back(json{{"codec", curve.label()},
                          {"sequence", curve.sequence()},
                          {"points", std::move(points)}});
  }
  return json{{"rate_unit", to_string(set.rate_unit())}, {"curves", std::move(curves)}};
}

EvaluationSet set_from_json(const json& j) {
  const RateUnit unit = rate_unit_from_string(j.at("rate_unit").get<std::string>());
  std::vector<RdCurve> curves;
  for (const json& c : j.at("curves")) {
    std::vector<RdPoint> points;
    for (const json& p : c.at("points")) {
      points.push_back({p.at("rate").get<double>(), p.at("psnr").get<double>()});
    }
    curves.push_back(RdCurve::validate(std::move(points), unit, c.at("codec").get<std::string>(),
                                       c.at("sequence").get<std::string>()));
  }
  return EvaluationSet::validate(std::move(curves));
}

std::string fixed_decimals(double value, int decimals) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, decimals);
  return std::string(buf, ptr);
}

std::string markdown_report(const ComparisonReport& report) {
  std::ostringstream out;
  out << "## BD-rate comparison: " << report.settings.test << " vs "
      << report.settings.reference << "\n\n";
  out << "settings: interpolator=" << to_string(report.settings.interpolator)
      << ", averaging_mode=" << to_string(report.settings.averaging_mode)
      << ", divergence_threshold=" << fixed_decimals(report.settings.divergence_threshold, 2)
      << " pp";
  if (report.settings.cubic_fallback) out << ", cubic_fallback=on";
  out << "\n\n";

  std::vector<std::string> header;
  std::vector<std::string> row;
  for (const auto& [sequence, result] : report.per_sequence) {
    header.push_back(sequence);
    row.push_back(result ? fixed_decimals(result->value, 2) : "n/a");
  }
  header.push_back("Average of BD-BRs");
  row.push_back(fixed_decimals(report.mean_of_metrics, 2));
  header.push_back("BD-BR on average RD curve");
  row.push_back(fixed_decimals(report.metric_on_average, 2));

  auto emit_row = [&out](const std::vector<std::string>& cells) {
    out << "|";
    for (const std::string& cell : cells) out << " " << cell << " |";
    out << "\n";
  };
  emit_row(header);
  out << "|";
  for (std::size_t i = 0; i < header.size(); ++i) out << "---|";
  out << "\n";
  emit_row(row);

  out << "\nverdict: " << to_string(report.verdict) << " (divergence "
      << fixed_decimals(report.divergence, 2) << " pp)\n";
  return out.str();
}

}  // namespace

ReportFormat report_format_from_string(std::string_view s) {
  if (s == "json") return ReportFormat::json;
  if (s == "markdown" || s == "md") return ReportFormat::markdown;
  throw RdError(ErrorCode::InvalidParameter,
                "format must be json or markdown, got '" + std::string(s) + "'");
}

std::string format_number(double value, int significant) {
  char buf[64];
  auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, significant);
  return std::string(buf, ptr);
}

RdTable parse_rd_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }

  RdTable table;
  std::size_t line_number = 0;
  std::size_t index = 0;

  if (index < lines.size() && trim(lines[index]).starts_with("#")) {
    std::string_view directive = trim(lines[index]);
    directive.remove_prefix(1);
    directive = trim(directive);
    constexpr std::string_view kPrefix = "rate_unit=";
    if (!directive.starts_with(kPrefix)) {
      throw RdError(ErrorCode::MalformedHeader,
                    "line 1: unrecognized directive '" + std::string(directive) +
                        "', expected rate_unit=bpp|kbps");
    }
    table.rate_unit = rate_unit_from_string(trim(directive.substr(kPrefix.size())));
    ++index;
  }

  if (index >= lines.size()) {
    throw RdError(ErrorCode::MalformedHeader, "missing header line 'codec,sequence,rate,psnr'");
  }
  {
    const std::vector<std::string_view> fields = split_fields(lines[index]);
    const std::vector<std::string_view> expected{"codec", "sequence", "rate", "psnr"};
    if (fields.size() != expected.size() || !std::equal(fields.begin(), fields.end(), expected.begin())) {
      throw RdError(ErrorCode::MalformedHeader,
                    "line " + std::to_string(index + 1) + ": header must be 'codec,sequence,rate,psnr', got '" +
                        std::string(trim(lines[index])) + "'");
    }
    ++index;
  }

  std::map<std::tuple<std::string, std::string, double>, std::size_t> seen;
  for (; index < lines.size(); ++index) {
    line_number = index + 1;
    const std::string_view raw = trim(lines[index]);
    if (raw.empty()) continue;
    const std::vector<std::string_view> fields = split_fields(raw);
    if (fields.size() != 4) {
      throw RdError(ErrorCode::MalformedHeader, "line " + std::to_string(line_number) +
                                                    ": expected 4 fields, got " +
                                                    std::to_string(fields.size()));
    }
    if (fields[0].empty() || fields[1].empty()) {
      throw RdError(ErrorCode::MalformedHeader,
                    "line " + std::to_string(line_number) + ": empty codec or sequence field");
    }
    RdTableRow row;
    row.codec = std::string(fields[0]);
    row.sequence = std::string(fields[1]);
    row.rate = parse_double(fields[2], line_number, "rate");
    row.quality = parse_double(fields[3], line_number, "psnr");

    auto key = std::make_tuple(row.codec, row.sequence, row.rate);
    auto [it, inserted] = seen.emplace(key, line_number);
    if (!inserted) {
      throw RdError(ErrorCode::DuplicateTriple,
                    "line " + std::to_string(line_number) + ": duplicate (codec, sequence, rate) = (" +
                        row.codec + ", " + row.sequence + ", " + format_number(row.rate) +
                        "), first seen on line " + std::to_string(it->second));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string emit_rd_csv(const RdTable& table) {
  std::vector<RdTableRow> rows = table.rows;
  std::sort(rows.begin(), rows.end(), [](const RdTableRow& a, const RdTableRow& b) {
    return std::tie(a.codec, a.sequence, a.rate) < std::tie(b.codec, b.sequence, b.rate);
  });

  std::ostringstream out;
  out << "# rate_unit=" << to_string(table.rate_unit) << "\n";
  out << "codec,sequence,rate,psnr\n";
  for (const RdTableRow& row : rows) {
    out << row.codec << "," << row.sequence << "," << format_number(row.rate) << ","
        << format_number(row.quality) << "\n";
  }
  return out.str();
}

RdTable to_rd_table(const EvaluationSet& set) {
  RdTable table;
  table.rate_unit = set.rate_unit();
  for (const RdCurve& curve : set.all_curves()) {
    for (const RdPoint& p : curve.points()) {
      table.rows.push_back({curve.label(), curve.sequence(), p.rate, p.quality});
    }
  }
  return table;
}

EvaluationSet to_evaluation_set(const RdTable& table, MonotonePolicy policy,
                                std::vector<std::string>* warnings) {
  std::map<std::pair<std::string, std::string>, std::vector<RdPoint>> grouped;
  for (const RdTableRow& row : table.rows) {
    grouped[{row.codec, row.sequence}].push_back({row.rate, row.quality});
  }
  std::vector<RdCurve> curves;
  curves.reserve(grouped.size());
  for (auto& [key, points] : grouped) {
    const std::size_t before = points.size();
    RdCurve curve =
        RdCurve::validate(std::move(points), table.rate_unit, key.first, key.second, policy);
    if (warnings != nullptr && curve.size() != before) {
      warnings->push_back("dropped " + std::to_string(before - curve.size()) +
                          " dominated point(s) from " + key.first + "/" + key.second);
    }
    curves.push_back(std::move(curve));
  }
  return EvaluationSet::validate(std::move(curves));
}

std::string emit_report(const ComparisonReport& report, ReportFormat format) {
  if (format == ReportFormat::markdown) return markdown_report(report);
  return report_to_json(report).dump(2) + "\n";
}

std::string emit_loo_reports(const std::map<std::string, ComparisonReport>& by_excluded,
                             ReportFormat format) {
  if (format == ReportFormat::json) {
    json exclusions = json::object();
    for (const auto& [excluded, report] : by_excluded) {
      exclusions[excluded] = report_to_json(report);
    }
    return json{{"leave_one_out", std::move(exclusions)}}.dump(2) + "\n";
  }
  std::ostringstream out;
  for (const auto& [excluded, report] : by_excluded) {
    out << "# excluding " << excluded << "\n\n" << markdown_report(report) << "\n";
  }
  return out.str();
}

ComparisonReport parse_report_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw RdError(ErrorCode::MalformedHeader, std::string("report JSON: ") + e.what());
  }
  return report_from_json(j);
}

std::string evaluation_set_to_json(const EvaluationSet& set) {
  return set_to_json(set).dump(2) + "\n";
}

EvaluationSet evaluation_set_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw RdError(ErrorCode::MalformedHeader, std::string("set JSON: ") + e.what());
  }
  return set_from_json(j);
}

std::string paradox_instances_to_json(const ParadoxSearchConfig& config,
                                      const std::vector<ParadoxInstance>& instances) {
  json out{{"config",
            {{"num_sequences", config.num_sequences},
             {"points_per_curve", config.points_per_curve},
             {"rate_range", {config.rate_range.first, config.rate_range.second}},
             {"psnr_range", {config.psnr_range.first, config.psnr_range.second}},
             {"trials", config.trials},
             {"seed", config.seed},
             {"interpolator", to_string(config.interpolator)},
             {"divergence_threshold", config.divergence_threshold}}},
           {"count", instances.size()},
           {"instances", json::array()}};
  for (const ParadoxInstance& instance : instances) {
    out["instances"].push_back(json{{"trial", instance.trial},
                                    {"set", set_to_json(instance.set)},
                                    {"report", report_to_json(instance.report)}});
  }
  return out.dump(2) + "\n";
}

std::vector<ParadoxInstance> paradox_instances_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw RdError(ErrorCode::MalformedHeader, std::string("instances JSON: ") + e.what());
  }
  std::vector<ParadoxInstance> instances;
  for (const json& entry : j.at("instances")) {
    instances.push_back(ParadoxInstance{entry.at("trial").get<int>(),
                                        set_from_json(entry.at("set")),
                                        report_from_json(entry.at("report"))});
  }
  return instances;
}

std::vector<std::filesystem::path> emit_plot_data(const EvaluationSet& set,
                                                  const std::vector<AggregateCurve>& aggregates,
                                                  const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);

  auto write_file = [](const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      throw RdError(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
    }
    out << content;
    if (!out) throw RdError(ErrorCode::IoError, "short write to " + path.string());
  };

  std::vector<std::filesystem::path> written;
  for (const std::string& sequence : set.sequences()) {
    std::ostringstream out;
    out << "codec,rate,psnr\n";
    for (const std::string& codec : set.codecs()) {
      for (const RdPoint& p : set.curve(codec, sequence).points()) {
        out << codec << "," << format_number(p.rate) << "," << format_number(p.quality) << "\n";
      }
    }
    const std::filesystem::path path = dir / (sequence + ".csv");
    write_file(path, out.str());
    written.push_back(path);
  }

  if (!aggregates.empty()) {
    std::ostringstream out;
    out << "codec,rate,psnr\n";
    for (const AggregateCurve& aggregate : aggregates) {
      for (const RdPoint& p : aggregate.curve.points()) {
        out << aggregate.curve.label() << "," << format_number(p.rate) << ","
            << format_number(p.quality) << "\n";
      }
    }
    const std::filesystem::path path = dir / "average.csv";
    write_file(path, out.str());
    written.push_back(path);
  }
  return written;
}

}  // namespace rdeval
