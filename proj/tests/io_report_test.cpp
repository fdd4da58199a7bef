#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "rdeval/io_report.hpp"
#include "rdeval/synthetic.hpp"

using namespace rdeval;

namespace {

const char* kSmallCsv =
    "codec,sequence,rate,psnr\n"
    "anchor,Beauty,0.05,33.1\n"
    "anchor,Beauty,0.1,34.0\n"
    "anchor,Beauty,0.2,34.8\n"
    "anchor,Beauty,0.4,35.5\n"
    "proposed,Beauty,0.04,33.2\n"
    "proposed,Beauty,0.09,34.1\n"
    "proposed,Beauty,0.18,34.9\n"
    "proposed,Beauty,0.36,35.6\n";

ComparisonReport table_shaped_report() {
  ComparisonReport report;
  report.settings = {"anchor", "proposed", Interpolator::pchip, AveragingMode::index_aligned, 2.0,
                     false};
  const std::vector<std::pair<std::string, double>> rows{
      {"Beauty", -5.43},    {"Bosphorus", -25.16}, {"Honeybee", -23.19}, {"Jockey", -5.27},
      {"ReadySetGo", 16.80}, {"ShakeNDry", -4.77},  {"YachtRide", -2.22}};
  for (const auto& [name, value] : rows) {
    report.per_sequence.emplace(
        name, BdResult{value, Metric::bd_rate, 33.0, 39.0, Interpolator::pchip, false});
  }
  report.mean_of_metrics = -7.0342857142857143;
  report.metric_on_average = 3.56;
  report.divergence = 10.594285714285714;
  report.verdict = Verdict::sign_conflict;
  return report;
}

std::filesystem::path fresh_dir(const char* name) {
  const std::filesystem::path dir = std::filesystem::current_path() / "test_tmp" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_SUITE("io_report") {

TEST_CASE("parse_rd_csv reads a well-formed file") {
  const RdTable table = parse_rd_csv(kSmallCsv);
  CHECK(table.rows.size() == 8);
  CHECK(table.rate_unit == RateUnit::bpp);
  CHECK(table.rows[0].codec == "anchor");
  CHECK(table.rows[0].sequence == "Beauty");
  CHECK(table.rows[0].rate == 0.05);
  CHECK(table.rows[4].codec == "proposed");
}

TEST_CASE("parse_rd_csv honors the rate_unit directive") {
  const RdTable table = parse_rd_csv("# rate_unit=kbps\ncodec,sequence,rate,psnr\na,s,100,30\na,s,200,33\n");
  CHECK(table.rate_unit == RateUnit::kbps);
  CHECK_THROWS_WITH_AS(parse_rd_csv("# rate_unit=mbps\ncodec,sequence,rate,psnr\n"),
                       doctest::Contains("UnknownUnit"), RdError);
}

TEST_CASE("parse_rd_csv rejects a renamed header column") {
  CHECK_THROWS_WITH_AS(parse_rd_csv("codec,seq,rate,psnr\na,s,1,30\n"),
                       doctest::Contains("MalformedHeader"), RdError);
}

TEST_CASE("parse_rd_csv reports non-numeric fields with 1-based line numbers") {
  const char* csv =
      "codec,sequence,rate,psnr\n"
      "a,Beauty,0.05,abc\n";
  CHECK_THROWS_WITH_AS(parse_rd_csv(csv), doctest::Contains("line 2"), RdError);
  try {
    parse_rd_csv(csv);
  } catch (const RdError& e) {
    CHECK(e.code() == ErrorCode::NonNumericField);
  }
}

TEST_CASE("parse_rd_csv rejects duplicate (codec, sequence, rate) triples") {
  const char* csv =
      "codec,sequence,rate,psnr\n"
      "a,s,0.05,30\n"
      "a,s,0.05,31\n";
  CHECK_THROWS_WITH_AS(parse_rd_csv(csv), doctest::Contains("DuplicateTriple"), RdError);
}

TEST_CASE("csv emit then parse is a fixpoint") {
  const RdTable t1 = parse_rd_csv(kSmallCsv);
  const std::string e1 = emit_rd_csv(t1);
  const RdTable t2 = parse_rd_csv(e1);
  const std::string e2 = emit_rd_csv(t2);
  CHECK(e1 == e2);
  CHECK(t1.rows.size() == t2.rows.size());
  for (std::size_t i = 0; i < t1.rows.size(); ++i) {
    CHECK(t1.rows[i] == t2.rows[i]);  // inputs carry < 9 significant digits
  }
}

TEST_CASE("csv round-trips preserve 9 significant digits") {
  RdTable table;
  table.rows.push_back({"a", "s", 0.123456789123, 31.9876543219});
  table.rows.push_back({"a", "s", 1.0 / 3.0, 37.123456789});
  const RdTable back = parse_rd_csv(emit_rd_csv(table));
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    CHECK(back.rows[i].rate ==
          doctest::Approx(table.rows[i].rate).epsilon(1e-9));
    CHECK(back.rows[i].quality ==
          doctest::Approx(table.rows[i].quality).epsilon(1e-9));
  }
}

TEST_CASE("to_evaluation_set groups rows and applies the monotone policy") {
  const EvaluationSet set = to_evaluation_set(parse_rd_csv(kSmallCsv));
  CHECK(set.codecs() == std::vector<std::string>{"anchor", "proposed"});
  CHECK(set.sequences() == std::vector<std::string>{"Beauty"});

  const char* nonmonotone =
      "codec,sequence,rate,psnr\n"
      "a,s,1,30\n"
      "a,s,2,29\n"
      "a,s,3,31\n"
      "b,s,1,30\n"
      "b,s,3,31\n";
  CHECK_THROWS_AS(to_evaluation_set(parse_rd_csv(nonmonotone)), RdError);
  std::vector<std::string> warnings;
  const EvaluationSet repaired =
      to_evaluation_set(parse_rd_csv(nonmonotone), MonotonePolicy::drop_dominated, &warnings);
  CHECK(repaired.curve("a", "s").size() == 2);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("a/s") != std::string::npos);
}

TEST_CASE("markdown report renders the aggregate columns and verdict") {
  const std::string md = emit_report(table_shaped_report(), ReportFormat::markdown);
  CHECK(md.find("| Beauty | Bosphorus | Honeybee | Jockey | ReadySetGo | ShakeNDry | YachtRide "
                "| Average of BD-BRs | BD-BR on average RD curve |") != std::string::npos);
  CHECK(md.find("| -7.03 | 3.56 |") != std::string::npos);
  CHECK(md.find("verdict: sign_conflict") != std::string::npos);
  CHECK(md.find("interpolator=pchip") != std::string::npos);
}

TEST_CASE("markdown for a single sequence shows equal aggregates") {
  ComparisonReport report;
  report.settings = {"anchor", "proposed", Interpolator::pchip, AveragingMode::index_aligned, 2.0,
                     false};
  report.per_sequence.emplace(
      "only", BdResult{-4.2, Metric::bd_rate, 30.0, 36.0, Interpolator::pchip, false});
  report.mean_of_metrics = -4.2;
  report.metric_on_average = -4.2;
  report.verdict = Verdict::consistent;
  report.divergence = 0.0;
  const std::string md = emit_report(report, ReportFormat::markdown);
  CHECK(md.find("| -4.20 | -4.20 |") != std::string::npos);
}

TEST_CASE("report JSON round-trips exactly") {
  const ComparisonReport report = table_shaped_report();
  const std::string text = emit_report(report, ReportFormat::json);
  CHECK(parse_report_json(text) == report);

  // also with an undefined sequence entry
  ComparisonReport with_null = report;
  with_null.per_sequence["Undefined"] = std::nullopt;
  CHECK(parse_report_json(emit_report(with_null, ReportFormat::json)) == with_null);
}

TEST_CASE("report JSON keeps its schema stable") {
  const std::string text = emit_report(table_shaped_report(), ReportFormat::json);
  for (const char* key : {"\"settings\"", "\"per_sequence\"", "\"mean_of_metrics\"",
                          "\"metric_on_average\"", "\"verdict\"", "\"divergence\"",
                          "\"interpolator\"", "\"averaging_mode\"", "\"divergence_threshold\"",
                          "\"reference\"", "\"test\"", "\"overlap_low\"", "\"overlap_high\"",
                          "\"fallback_fired\"", "\"value\"", "\"metric\""}) {
    CHECK_MESSAGE(text.find(key) != std::string::npos, "missing key ", key);
  }
}

TEST_CASE("evaluation set JSON round-trips") {
  const EvaluationSet set = to_evaluation_set(parse_rd_csv(kSmallCsv));
  CHECK(evaluation_set_from_json(evaluation_set_to_json(set)) == set);
}

TEST_CASE("paradox instances JSON round-trips") {
  ParadoxSearchConfig config;
  config.trials = 400;
  config.seed = 42;
  const auto instances = search_paradox(config);
  REQUIRE(!instances.empty());
  const std::string text = paradox_instances_to_json(config, instances);
  const auto back = paradox_instances_from_json(text);
  REQUIRE(back.size() == instances.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].trial == instances[i].trial);
    CHECK(back[i].set == instances[i].set);
    CHECK(back[i].report == instances[i].report);
  }
}

TEST_CASE("emit_plot_data writes one file per sequence plus the average") {
  std::vector<RdCurve> curves;
  const std::vector<std::string> sequences{"Beauty",    "Bosphorus", "Honeybee", "Jockey",
                                           "ReadySetGo", "ShakeNDry", "YachtRide"};
  for (const char* codec : {"anchor", "proposed"}) {
    double shift = codec[0] == 'a' ? 0.0 : -0.005;
    for (const std::string& seq : sequences) {
      curves.push_back(RdCurve::validate(
          {{0.05 + shift, 33.0}, {0.1 + shift, 34.5}, {0.2 + shift, 36.0}, {0.4 + shift, 37.5}},
          RateUnit::bpp, codec, seq));
    }
  }
  const EvaluationSet set = EvaluationSet::validate(std::move(curves));
  std::vector<AggregateCurve> aggregates{average_curve_index_aligned(set, "anchor"),
                                         average_curve_index_aligned(set, "proposed")};

  const auto dir = fresh_dir("plots");
  const auto written = emit_plot_data(set, aggregates, dir);
  CHECK(written.size() == 8);
  std::set<std::string> names;
  for (const auto& path : written) names.insert(path.filename().string());
  CHECK(names.count("Beauty.csv") == 1);
  CHECK(names.count("average.csv") == 1);

  const std::string beauty = slurp(dir / "Beauty.csv");
  CHECK(beauty.rfind("codec,rate,psnr\n", 0) == 0);
  CHECK(beauty.find("anchor,0.05,33") != std::string::npos);

  // determinism: a rerun produces byte-identical files
  std::map<std::string, std::string> firsts;
  for (const auto& path : written) firsts[path.filename().string()] = slurp(path);
  const auto rerun = emit_plot_data(set, aggregates, dir);
  for (const auto& path : rerun) {
    CHECK(firsts.at(path.filename().string()) == slurp(path));
  }

  // no average.csv without aggregates
  const auto dir2 = fresh_dir("plots_noavg");
  const auto no_avg = emit_plot_data(set, {}, dir2);
  CHECK(no_avg.size() == 7);
  CHECK_FALSE(std::filesystem::exists(dir2 / "average.csv"));
}

TEST_CASE("format_number keeps at most 9 significant digits") {
  CHECK(format_number(30.0) == "30");
  CHECK(format_number(0.05) == "0.05");
  CHECK(format_number(1.0 / 3.0) == "0.333333333");
  CHECK(format_number(123456789.123) == "123456789");
}

}  // TEST_SUITE
