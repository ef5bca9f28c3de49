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

#include "gapdecomp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "gapdecomp/errors.hpp"

namespace gapdecomp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Counts are carried as integers through the sweep so EER crossing detection
// is exact: far == frr iff n_spoof_ge * n_bonafide == n_bonafide_lt * n_spoof.
struct CountedPoint {
  double threshold;
  std::int64_t n_spoof_ge;   // spoof scores >= threshold
  std::int64_t n_bonafide_lt;  // bonafide scores < threshold
};

void check_classes(std::span<const double> bonafide,
                   std::span<const double> spoof) {
  if (bonafide.empty() || spoof.empty()) {
    throw ContractError("eer/roc need at least one score of each class, got " +
                        std::to_string(bonafide.size()) + " bonafide and " +
                        std::to_string(spoof.size()) + " spoof");
  }
  for (double s : bonafide) {
    if (!std::isfinite(s)) throw ContractError("non-finite bonafide score");
  }
  for (double s : spoof) {
    if (!std::isfinite(s)) throw ContractError("non-finite spoof score");
  }
}

std::vector<CountedPoint> sweep(std::span<const double> bonafide,
                                std::span<const double> spoof) {
  std::vector<double> bona(bonafide.begin(), bonafide.end());
  std::vector<double> sp(spoof.begin(), spoof.end());
  std::sort(bona.begin(), bona.end());
  std::sort(sp.begin(), sp.end());

  std::vector<double> thresholds;
  thresholds.reserve(bona.size() + sp.size());
  std::merge(bona.begin(), bona.end(), sp.begin(), sp.end(),
             std::back_inserter(thresholds));
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());

  const auto n_spoof = static_cast<std::int64_t>(sp.size());

  std::vector<CountedPoint> points;
  points.reserve(thresholds.size() + 2);
  points.push_back({-kInf, n_spoof, 0});
  for (double t : thresholds) {
    const auto spoof_lt = static_cast<std::int64_t>(
        std::lower_bound(sp.begin(), sp.end(), t) - sp.begin());
    const auto bona_lt = static_cast<std::int64_t>(
        std::lower_bound(bona.begin(), bona.end(), t) - bona.begin());
    points.push_back({t, n_spoof - spoof_lt, bona_lt});
  }
  points.push_back({kInf, 0, static_cast<std::int64_t>(bona.size())});
  return points;
}

}  // namespace

std::vector<RocPoint> roc_points(std::span<const double> bonafide,
                                 std::span<const double> spoof) {
  check_classes(bonafide, spoof);
  const double n_b = static_cast<double>(bonafide.size());
  const double n_s = static_cast<double>(spoof.size());

  std::vector<RocPoint> out;
  for (const CountedPoint& p : sweep(bonafide, spoof)) {
    out.push_back({p.threshold, static_cast<double>(p.n_spoof_ge) / n_s,
                   static_cast<double>(p.n_bonafide_lt) / n_b});
  }
  return out;
}

EerResult eer(std::span<const double> bonafide, std::span<const double> spoof) {
  check_classes(bonafide, spoof);
  const auto points = sweep(bonafide, spoof);
  const auto n_b = static_cast<std::int64_t>(bonafide.size());
  const auto n_s = static_cast<std::int64_t>(spoof.size());

  EerResult result;
  result.n_bonafide = bonafide.size();
  result.n_spoof = spoof.size();

  // diff(t) = far(t) - frr(t) is non-increasing: it starts at +1 and ends at
  // -1, so the first point where it is <= 0 locates the crossing.
  std::size_t i = 0;
  std::int64_t diff = 0;
  for (; i < points.size(); ++i) {
    diff = points[i].n_spoof_ge * n_b - points[i].n_bonafide_lt * n_s;
    if (diff <= 0) break;
  }

  if (diff == 0) {
    result.eer =
        static_cast<double>(points[i].n_spoof_ge) / static_cast<double>(n_s);
    result.threshold = points[i].threshold;
    return result;
  }

  const CountedPoint& lo = points[i - 1];
  const CountedPoint& hi = points[i];
  const double far_lo = static_cast<double>(lo.n_spoof_ge) / static_cast<double>(n_s);
  const double frr_lo = static_cast<double>(lo.n_bonafide_lt) / static_cast<double>(n_b);
  const double far_hi = static_cast<double>(hi.n_spoof_ge) / static_cast<double>(n_s);
  const double frr_hi = static_cast<double>(hi.n_bonafide_lt) / static_cast<double>(n_b);
  const double d_lo = far_lo - frr_lo;
  const double d_hi = far_hi - frr_hi;
  const double s = d_lo / (d_lo - d_hi);

  result.eer = far_lo + s * (far_hi - far_lo);
  if (std::isinf(hi.threshold)) {
    // Crossing beyond the largest score; every threshold above it realizes
    // the same operating point, so report the last finite one.
    result.threshold = lo.threshold;
  } else {
    result.threshold = lo.threshold + s * (hi.threshold - lo.threshold);
  }
  if (!(result.eer >= 0.0 && result.eer <= 1.0)) {
    throw NumericError("eer outside [0, 1]: " + std::to_string(result.eer));
  }
  return result;
}

namespace {

void split_by_label(const ScoreSet& scores, std::vector<double>& bonafide,
                    std::vector<double>& spoof) {
  bonafide.reserve(scores.count(Label::bonafide));
  spoof.reserve(scores.count(Label::spoof));
  for (const ScoreEntry& e : scores.entries()) {
    (e.label == Label::bonafide ? bonafide : spoof).push_back(e.score);
  }
}

}  // namespace

std::vector<RocPoint> roc_points(const ScoreSet& scores) {
  std::vector<double> bonafide, spoof;
  split_by_label(scores, bonafide, spoof);
  return roc_points(bonafide, spoof);
}

EerResult eer(const ScoreSet& scores) {
  std::vector<double> bonafide, spoof;
  split_by_label(scores, bonafide, spoof);
  return eer(bonafide, spoof);
}

}  // namespace gapdecomp
