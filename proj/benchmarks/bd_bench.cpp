#include <benchmark/benchmark.h>

#include <vector>

#include "rdeval/aggregation.hpp"
#include "rdeval/bd_metrics.hpp"
#include "rdeval/synthetic.hpp"

namespace {

using namespace rdeval;

RdCurve reference_curve() {
  return RdCurve::validate({{0.05, 33.1}, {0.1, 34.6}, {0.2, 36.0}, {0.4, 37.3}}, RateUnit::bpp,
                           "ref", "s");
}

RdCurve test_curve() {
  return RdCurve::validate({{0.045, 33.3}, {0.09, 34.8}, {0.19, 36.1}, {0.38, 37.5}},
                           RateUnit::bpp, "test", "s");
}

EvaluationSet seven_sequence_set() {
  std::vector<RdCurve> curves;
  for (int i = 0; i < 7; ++i) {
    const double shift = 0.02 * i;
    const std::string seq = "seq" + std::to_string(i);
    curves.push_back(RdCurve::validate({{0.05 + shift, 33.0 + i},
                                        {0.1 + shift, 34.5 + i},
                                        {0.2 + shift, 36.0 + i},
                                        {0.4 + shift, 37.5 + i}},
                                       RateUnit::bpp, "ref", seq));
    curves.push_back(RdCurve::validate({{0.045 + shift, 33.2 + i},
                                        {0.095 + shift, 34.7 + i},
                                        {0.19 + shift, 36.1 + i},
                                        {0.38 + shift, 37.6 + i}},
                                       RateUnit::bpp, "test", seq));
  }
  return EvaluationSet::validate(std::move(curves));
}

void BM_BdRatePchip(benchmark::State& state) {
  const RdCurve ref = reference_curve();
  const RdCurve test = test_curve();
  for (auto _ : state) {
    benchmark::DoNotOptimize(bd_rate(ref, test, Interpolator::pchip).value);
  }
}
BENCHMARK(BM_BdRatePchip);

void BM_BdRateCubic(benchmark::State& state) {
  const RdCurve ref = reference_curve();
  const RdCurve test = test_curve();
  for (auto _ : state) {
    benchmark::DoNotOptimize(bd_rate(ref, test, Interpolator::cubic_polyfit).value);
  }
}
BENCHMARK(BM_BdRateCubic);

void BM_CompareSevenSequences(benchmark::State& state) {
  const EvaluationSet set = seven_sequence_set();
  for (auto _ : state) {
    benchmark::DoNotOptimize(compare(set, "ref", "test").verdict);
  }
}
BENCHMARK(BM_CompareSevenSequences);

void BM_ParadoxSearch100Trials(benchmark::State& state) {
  ParadoxSearchConfig config;
  config.trials = 100;
  for (auto _ : state) {
    benchmark::DoNotOptimize(search_paradox(config).size());
  }
}
BENCHMARK(BM_ParadoxSearch100Trials);

}  // namespace

BENCHMARK_MAIN();
