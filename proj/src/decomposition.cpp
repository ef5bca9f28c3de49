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

#include "gapdecomp/decomposition.hpp"

#include <cmath>

#include "gapdecomp/errors.hpp"

namespace gapdecomp {

namespace {

void check_fraction(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw ContractError(std::string(name) + " must be in [0, 1], got " +
                        std::to_string(value));
  }
}

TrialAggregate aggregate_field(const std::vector<GapDecomposition>& trials,
                               double GapDecomposition::* field) {
  TrialAggregate agg;
  agg.n_trials = trials.size();
  agg.degenerate = trials.size() == 1;

  double sum = 0.0;
  for (const GapDecomposition& t : trials) sum += t.*field;
  agg.mean = sum / static_cast<double>(trials.size());

  if (trials.size() > 1) {
    double ss = 0.0;
    for (const GapDecomposition& t : trials) {
      const double d = t.*field - agg.mean;
      ss += d * d;
    }
    agg.std_dev = std::sqrt(ss / static_cast<double>(trials.size() - 1));
  }
  return agg;
}

}  // namespace

GapDecomposition decompose(double eer_in_in, double eer_outdom_outdom,
                           double eer_in_out) {
  check_fraction(eer_in_in, "eer_in_in");
  check_fraction(eer_outdom_outdom, "eer_outdom_outdom");
  check_fraction(eer_in_out, "eer_in_out");

  GapDecomposition g;
  g.eer_in_in = eer_in_in;
  g.eer_outdom_outdom = eer_outdom_outdom;
  g.eer_in_out = eer_in_out;
  g.performance_gap = eer_in_out - eer_in_in;
  g.hardness_gap = eer_outdom_outdom - eer_in_in;
  g.difference_gap = eer_in_out - eer_outdom_outdom;

  const double residual =
      g.performance_gap - (g.hardness_gap + g.difference_gap);
  if (std::abs(residual) > 1e-12) {
    throw NumericError("gap identity violated: residual " +
                       std::to_string(residual));
  }
  return g;
}

GapAggregates aggregate_trials(const std::vector<GapDecomposition>& trials) {
  if (trials.empty()) {
    throw ContractError("aggregate_trials: empty trial list");
  }
  GapAggregates agg;
  agg.eer_in_in = aggregate_field(trials, &GapDecomposition::eer_in_in);
  agg.eer_outdom_outdom =
      aggregate_field(trials, &GapDecomposition::eer_outdom_outdom);
  agg.eer_in_out = aggregate_field(trials, &GapDecomposition::eer_in_out);
  agg.performance_gap =
      aggregate_field(trials, &GapDecomposition::performance_gap);
  agg.hardness_gap = aggregate_field(trials, &GapDecomposition::hardness_gap);
  agg.difference_gap =
      aggregate_field(trials, &GapDecomposition::difference_gap);
  return agg;
}

std::vector<ScatterRow> scatter_table(const std::vector<ScatterCell>& cells) {
  std::vector<ScatterRow> rows;
  rows.reserve(cells.size());
  for (const ScatterCell& c : cells) {
    check_fraction(c.eer_in_in, "eer_in_in");
    check_fraction(c.eer_in_out, "eer_in_out");
    rows.push_back({c.model_tag, c.eer_in_in, c.eer_in_out, c.eer_in_in});
  }
  return rows;
}

}  // namespace gapdecomp
