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

#ifndef GAPDECOMP_SYNTHLAB_HPP_
#define GAPDECOMP_SYNTHLAB_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gapdecomp/decomposition.hpp"
#include "gapdecomp/manifest.hpp"

namespace gapdecomp {

// Synthetic two-class domain: isotropic Gaussians N(mean, sigma^2 I) per
// class. For this family the minimal achievable EER is analytic, which is
// what makes the lab an oracle for the gap decomposition.
struct DomainSpec {
  std::size_t dim = 1;
  std::vector<double> mean_bonafide;
  std::vector<double> mean_spoof;
  double sigma = 1.0;
};

struct FeatureRow {
  std::vector<double> x;
  Label label = Label::bonafide;
};

struct FeatureSet {
  std::vector<FeatureRow> rows;
  std::size_t dim = 0;
  std::string spec_tag;
};

// Linear detector scoring dot(w, x) + b, higher = bonafide.
struct ToyModel {
  std::vector<double> weights;
  double bias = 0.0;
};

struct TrainConfig {
  double learning_rate = 1e-3;
  std::size_t max_epochs = 500;
  double early_stop_delta = 5e-3;  // absolute train-EER improvement
  std::size_t patience = 1;        // epochs without significant improvement
  std::size_t batch_size = 16;
  std::uint64_t seed = 0;
};

// Mean logistic loss over the feature set plus its gradient, with the
// bonafide class mapped to +1 and spoof to -1.
struct LossGrad {
  double loss = 0.0;
  std::vector<double> grad_weights;
  double grad_bias = 0.0;
};

void validate(const DomainSpec& spec);

// n_per_class samples per class: the bonafide block first, then spoof, each
// row drawn coordinate-wise as mean + sigma * normal() from
// mt19937_64(seed). Deterministic per seed.
FeatureSet gen_domain(const DomainSpec& spec, std::size_t n_per_class,
                      std::uint64_t seed, const std::string& tag = "synth");

// Minimal achievable EER for the spec's symmetric equal-covariance pair:
// Phi(-||mean_bonafide - mean_spoof|| / (2 sigma)).
double bayes_eer(const DomainSpec& spec);

// Standard normal CDF.
double normal_cdf(double x);

LossGrad logistic_loss_grad(const ToyModel& model, const FeatureSet& features);

// Mini-batch gradient descent on the logistic loss, batch order reshuffled
// each epoch from cfg.seed. After each epoch the train EER is measured;
// training stops once it fails to improve on the best seen by more than
// early_stop_delta for `patience` consecutive epochs (or at max_epochs) and
// the parameters of the best-train-EER epoch are returned.
ToyModel train_toy(const FeatureSet& features, const TrainConfig& cfg);

// Scores every row with the model; ids are "<id_prefix>-<row index>".
ScoreSet score_toy(const ToyModel& model, const FeatureSet& features,
                   const std::string& id_prefix = "synth");

struct TrialResult {
  GapDecomposition gaps;
  std::array<EvalCell, 3> cells;  // D->D, D'->D', D->D'
};

struct ExperimentResult {
  std::vector<TrialResult> trials;
  std::vector<GapDecomposition> trial_gaps;  // convenience view of trials
  GapAggregates aggregates;
  double bayes_eer_in = 0.0;      // oracle for D
  double bayes_eer_outdom = 0.0;  // oracle for D'
  std::uint64_t master_seed = 0;
  std::string randomization;  // what is re-randomized per trial
};

// Full 2x2-cell procedure per trial: generate fresh D and D' feature sets,
// split each 80/20 (stratified, via the manifest split), train one model per
// domain, measure EER(D->D), EER(D'->D'), EER(D->D'), decompose, and
// aggregate across trials. Data, split, and training seeds are all derived
// from (cfg.seed, trial index), so trials are independent and the whole run
// is reproducible from cfg.seed alone.
ExperimentResult run_experiment(const DomainSpec& spec_in,
                                const DomainSpec& spec_outdom,
                                std::size_t n_per_class,
                                const TrainConfig& cfg,
                                std::size_t n_trials);

}  // namespace gapdecomp

#endif  // GAPDECOMP_SYNTHLAB_HPP_
