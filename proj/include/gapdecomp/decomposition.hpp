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

#ifndef GAPDECOMP_DECOMPOSITION_HPP_
#define GAPDECOMP_DECOMPOSITION_HPP_

#include <cstddef>
#include <string>
#include <vector>

namespace gapdecomp {

// One arrow of the 2x2 train/test matrix: the EER obtained by training on
// train_domain and evaluating on test_domain's test partition.
struct EvalCell {
  std::string train_domain;
  std::string test_domain;
  double eer = 0.0;
};

// The three evaluation cells and their gap decomposition. Sign convention
// throughout: positive gap = out-of-domain degradation (higher EER), i.e.
// every gap is out-of-domain-minus-in-domain.
//   performance_gap = eer_in_out     - eer_in_in
//   hardness_gap    = eer_outdom_outdom - eer_in_in
//   difference_gap  = eer_in_out     - eer_outdom_outdom
// performance_gap == hardness_gap + difference_gap holds to <= 1e-12 by
// construction and is re-checked on every decompose() call.
struct GapDecomposition {
  double eer_in_in = 0.0;          // D -> D
  double eer_outdom_outdom = 0.0;  // D' -> D'
  double eer_in_out = 0.0;         // D -> D'
  double performance_gap = 0.0;
  double hardness_gap = 0.0;
  double difference_gap = 0.0;
};

GapDecomposition decompose(double eer_in_in, double eer_outdom_outdom,
                           double eer_in_out);

// Mean and sample standard deviation (n-1 denominator) of one field across
// trials. A single trial reports std 0 and is flagged degenerate.
struct TrialAggregate {
  double mean = 0.0;
  double std_dev = 0.0;
  std::size_t n_trials = 0;
  bool degenerate = false;
};

struct GapAggregates {
  TrialAggregate eer_in_in;
  TrialAggregate eer_outdom_outdom;
  TrialAggregate eer_in_out;
  TrialAggregate performance_gap;
  TrialAggregate hardness_gap;
  TrialAggregate difference_gap;
};

GapAggregates aggregate_trials(const std::vector<GapDecomposition>& trials);

// Scatter data for the in-domain vs out-of-domain EER plot. A model
// generalizes ideally iff its point lies on the diagonal y == x.
struct ScatterCell {
  std::string model_tag;
  double eer_in_in = 0.0;
  double eer_in_out = 0.0;
};

struct ScatterRow {
  std::string model_tag;
  double eer_in_in = 0.0;   // x
  double eer_in_out = 0.0;  // y
  double diagonal = 0.0;    // ideal-generalization reference, equals x
};

std::vector<ScatterRow> scatter_table(const std::vector<ScatterCell>& cells);

}  // namespace gapdecomp

#endif  // GAPDECOMP_DECOMPOSITION_HPP_
