// Copyright 2026 The gapdecomp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GAPDECOMP_METRICS_HPP_
#define GAPDECOMP_METRICS_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "gapdecomp/manifest.hpp"

namespace gapdecomp {

// One operating point of the detector at threshold t under the fixed
// decision rule: accept (call bonafide) iff score >= t.
//   far(t) = |{spoof : score >= t}| / n_spoof
//   frr(t) = |{bonafide : score < t}| / n_bonafide
struct RocPoint {
  double threshold = 0.0;
  double far = 0.0;
  double frr = 0.0;
};

struct EerResult {
  double eer = 0.0;
  // Threshold where the far and frr step functions cross; interpolated when
  // the crossing falls between two operating points.
  double threshold = 0.0;
  std::size_t n_bonafide = 0;
  std::size_t n_spoof = 0;
};

// Operating points at every distinct score value, in strictly increasing
// threshold order, with sentinels at -inf (far 1, frr 0) and +inf
// (far 0, frr 1). far is non-increasing and frr non-decreasing across the
// returned list. Requires at least one finite score of each class.
std::vector<RocPoint> roc_points(std::span<const double> bonafide,
                                 std::span<const double> spoof);
std::vector<RocPoint> roc_points(const ScoreSet& scores);

// Equal Error Rate: scan operating points in increasing threshold order; if
// some point has far == frr, return it; otherwise take the adjacent points
// where (far - frr) changes sign and return the crossing of the two straight
// lines joining their far and frr values over that threshold interval.
// Polarity is never flipped, so anti-correlated scores give eer > 0.5.
EerResult eer(std::span<const double> bonafide, std::span<const double> spoof);
EerResult eer(const ScoreSet& scores);

}  // namespace gapdecomp

#endif  // GAPDECOMP_METRICS_HPP_
