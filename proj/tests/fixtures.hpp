// Shared test fixtures.
#pragma once

#include <string>
#include <vector>

#include "rdeval/rd_model.hpp"

namespace rdeval::testing {

/// A 3-sequence set, found by seeded search and frozen, where the full-set
/// verdict is a sign conflict (mean of per-sequence BD-rates negative,
/// averaged-curve BD-rate positive) and excluding seq-c flips the
/// averaged-curve BD-rate negative while the mean keeps its sign.
inline EvaluationSet loo_flip_set() {
  auto c = [](const char* codec, const char* seq, std::vector<RdPoint> pts) {
    return RdCurve::validate(std::move(pts), RateUnit::bpp, codec, seq);
  };
  std::vector<RdCurve> curves;
  curves.push_back(c("codec-1", "seq-a",
                     {{0.0753120958, 30.6214751},
                      {0.11577407, 31.1982507},
                      {0.193481738, 31.7594653},
                      {0.207693412, 33.8693553}}));
  curves.push_back(c("codec-1", "seq-b",
                     {{0.415555606, 35.9069029},
                      {0.451263686, 36.6535665},
                      {0.605129047, 37.3146398},
                      {0.764374944, 37.969919}}));
  curves.push_back(c("codec-1", "seq-c",
                     {{0.949256267, 40.6316823},
                      {1.25669079, 40.8581639},
                      {1.91873269, 42.3660852},
                      {2.09332133, 43.3257758}}));
  curves.push_back(c("codec-2", "seq-a",
                     {{0.0521537711, 31.2213206},
                      {0.0594286462, 31.6295236},
                      {0.0618910083, 31.8449484},
                      {0.0664714198, 32.7027449}}));
  curves.push_back(c("codec-2", "seq-b",
                     {{0.395022033, 35.3810387},
                      {0.480448091, 35.7585359},
                      {0.536000924, 37.6000964},
                      {0.640472509, 38.0754795}}));
  curves.push_back(c("codec-2", "seq-c",
                     {{1.20564634, 40.4208573},
                      {1.62233525, 41.1890835},
                      {2.71412686, 41.651978},
                      {2.89834276, 42.43722}}));
  return EvaluationSet::validate(std::move(curves));
}

}  // namespace rdeval::testing
