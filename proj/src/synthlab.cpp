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

#include "gapdecomp/synthlab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "gapdecomp/errors.hpp"
#include "gapdecomp/metrics.hpp"
#include "gapdecomp/rng.hpp"

namespace gapdecomp {

namespace {

// per-trial seed roles
enum Role : std::uint64_t {
  kGenIn = 0,
  kGenOutdom = 1,
  kSplitIn = 2,
  kSplitOutdom = 3,
  kTrainIn = 4,
  kTrainOutdom = 5,
};

double dot(const std::vector<double>& w, const std::vector<double>& x) {
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * x[i];
  return acc;
}

double sigmoid(double u) {
  if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}

// log(1 + exp(t)) without overflow
double softplus(double t) {
  if (t > 35.0) return t;
  return std::log1p(std::exp(t));
}

double train_eer(const ToyModel& model, const FeatureSet& features) {
  std::vector<double> bonafide, spoof;
  for (const FeatureRow& row : features.rows) {
    const double s = dot(model.weights, row.x) + model.bias;
    (row.label == Label::bonafide ? bonafide : spoof).push_back(s);
  }
  return eer(bonafide, spoof).eer;
}

void check_features(const FeatureSet& features, const char* op) {
  if (features.rows.empty()) {
    throw ContractError(std::string(op) + ": empty feature set");
  }
  std::size_t n_bonafide = 0;
  for (const FeatureRow& row : features.rows) {
    if (row.x.size() != features.dim) {
      throw ContractError(std::string(op) + ": row dimension " +
                          std::to_string(row.x.size()) + " != feature dim " +
                          std::to_string(features.dim));
    }
    if (row.label == Label::bonafide) ++n_bonafide;
  }
  if (n_bonafide == 0 || n_bonafide == features.rows.size()) {
    throw ContractError(std::string(op) + ": both classes required");
  }
}

FeatureSet gather_rows(const FeatureSet& features,
                       const std::vector<std::size_t>& indices,
                       const std::string& tag) {
  FeatureSet out;
  out.dim = features.dim;
  out.spec_tag = tag;
  out.rows.reserve(indices.size());
  for (std::size_t i : indices) out.rows.push_back(features.rows[i]);
  return out;
}

// 80/20 split of a feature set through the manifest split so the lab and
// file-based workflows share one stratification rule.
std::pair<FeatureSet, FeatureSet> split_features(const FeatureSet& features,
                                                 double ratio,
                                                 std::uint64_t seed,
                                                 const std::string& tag) {
  std::vector<UtteranceRecord> records;
  records.reserve(features.rows.size());
  for (std::size_t i = 0; i < features.rows.size(); ++i) {
    records.push_back(UtteranceRecord{tag + "-" + std::to_string(i), "-",
                                      features.rows[i].label, tag});
  }
  const Manifest manifest(std::move(records), tag);
  const Partition part = split(manifest, ratio, seed);

  auto to_indices = [&tag](const std::vector<std::string>& ids) {
    std::vector<std::size_t> out;
    out.reserve(ids.size());
    for (const std::string& id : ids) {
      out.push_back(std::stoul(id.substr(tag.size() + 1)));
    }
    return out;
  };
  return {gather_rows(features, to_indices(part.train_ids), tag + "-train"),
          gather_rows(features, to_indices(part.test_ids), tag + "-test")};
}

}  // namespace

void validate(const DomainSpec& spec) {
  if (spec.dim < 1) throw ContractError("domain spec: dim must be >= 1");
  if (!(spec.sigma > 0.0)) {
    throw ContractError("domain spec: sigma must be positive");
  }
  if (spec.mean_bonafide.size() != spec.dim ||
      spec.mean_spoof.size() != spec.dim) {
    throw ContractError("domain spec: mean vectors must have length dim");
  }
}

FeatureSet gen_domain(const DomainSpec& spec, std::size_t n_per_class,
                      std::uint64_t seed, const std::string& tag) {
  validate(spec);
  if (n_per_class < 1) {
    throw ContractError("gen_domain: n_per_class must be >= 1");
  }

  Rng rng(seed);
  FeatureSet out;
  out.dim = spec.dim;
  out.spec_tag = tag;
  out.rows.reserve(2 * n_per_class);
  for (int class_idx = 0; class_idx < 2; ++class_idx) {
    const Label label = class_idx == 0 ? Label::bonafide : Label::spoof;
    const std::vector<double>& mean =
        class_idx == 0 ? spec.mean_bonafide : spec.mean_spoof;
    for (std::size_t i = 0; i < n_per_class; ++i) {
      FeatureRow row;
      row.label = label;
      row.x.resize(spec.dim);
      for (std::size_t d = 0; d < spec.dim; ++d) {
        row.x[d] = mean[d] + spec.sigma * rng.normal();
      }
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double bayes_eer(const DomainSpec& spec) {
  validate(spec);
  double ss = 0.0;
  for (std::size_t d = 0; d < spec.dim; ++d) {
    const double diff = spec.mean_bonafide[d] - spec.mean_spoof[d];
    ss += diff * diff;
  }
  return normal_cdf(-std::sqrt(ss) / (2.0 * spec.sigma));
}

LossGrad logistic_loss_grad(const ToyModel& model,
                            const FeatureSet& features) {
  check_features(features, "logistic_loss_grad");
  if (model.weights.size() != features.dim) {
    throw ContractError("logistic_loss_grad: model dim " +
                        std::to_string(model.weights.size()) +
                        " != feature dim " + std::to_string(features.dim));
  }

  LossGrad out;
  out.grad_weights.assign(features.dim, 0.0);
  const double inv_n = 1.0 / static_cast<double>(features.rows.size());
  for (const FeatureRow& row : features.rows) {
    const double y = row.label == Label::bonafide ? 1.0 : -1.0;
    const double z = dot(model.weights, row.x) + model.bias;
    out.loss += softplus(-y * z) * inv_n;
    const double dz = -y * sigmoid(-y * z) * inv_n;
    for (std::size_t d = 0; d < features.dim; ++d) {
      out.grad_weights[d] += dz * row.x[d];
    }
    out.grad_bias += dz;
  }
  return out;
}

ToyModel train_toy(const FeatureSet& features, const TrainConfig& cfg) {
  check_features(features, "train_toy");
  if (!(cfg.learning_rate > 0.0)) {
    throw ContractError("train config: learning rate must be positive");
  }
  if (cfg.patience < 1) {
    throw ContractError("train config: patience must be >= 1");
  }
  if (cfg.batch_size < 1) {
    throw ContractError("train config: batch size must be >= 1");
  }

  const std::size_t n = features.rows.size();
  const std::size_t dim = features.dim;

  ToyModel model;
  model.weights.assign(dim, 0.0);
  ToyModel best = model;
  double best_eer = std::numeric_limits<double>::infinity();
  std::size_t epochs_without_improvement = 0;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(cfg.seed);

  std::vector<double> grad_w(dim);
  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
      const std::size_t end = std::min(n, start + cfg.batch_size);
      const double inv_batch = 1.0 / static_cast<double>(end - start);
      std::fill(grad_w.begin(), grad_w.end(), 0.0);
      double grad_b = 0.0;
      for (std::size_t k = start; k < end; ++k) {
        const FeatureRow& row = features.rows[order[k]];
        const double y = row.label == Label::bonafide ? 1.0 : -1.0;
        const double z = dot(model.weights, row.x) + model.bias;
        const double dz = -y * sigmoid(-y * z) * inv_batch;
        for (std::size_t d = 0; d < dim; ++d) grad_w[d] += dz * row.x[d];
        grad_b += dz;
      }
      for (std::size_t d = 0; d < dim; ++d) {
        model.weights[d] -= cfg.learning_rate * grad_w[d];
      }
      model.bias -= cfg.learning_rate * grad_b;
    }

    bool finite = std::isfinite(model.bias);
    for (double w : model.weights) finite = finite && std::isfinite(w);
    if (!finite || !std::isfinite(logistic_loss_grad(model, features).loss)) {
      throw NumericError("train_toy: non-finite loss at epoch " +
                         std::to_string(epoch));
    }

    const double epoch_eer = train_eer(model, features);
    const bool significant = best_eer - epoch_eer > cfg.early_stop_delta;
    if (epoch_eer < best_eer) {
      best_eer = epoch_eer;
      best = model;
    }
    if (significant) {
      epochs_without_improvement = 0;
    } else {
      ++epochs_without_improvement;
    }
    if (epochs_without_improvement >= cfg.patience) break;
  }
  return best;
}

ScoreSet score_toy(const ToyModel& model, const FeatureSet& features,
                   const std::string& id_prefix) {
  check_features(features, "score_toy");
  if (model.weights.size() != features.dim) {
    throw ContractError("score_toy: model dim " +
                        std::to_string(model.weights.size()) +
                        " != feature dim " + std::to_string(features.dim));
  }
  std::vector<ScoreEntry> entries;
  entries.reserve(features.rows.size());
  for (std::size_t i = 0; i < features.rows.size(); ++i) {
    const FeatureRow& row = features.rows[i];
    entries.push_back(ScoreEntry{id_prefix + "-" + std::to_string(i),
                                 dot(model.weights, row.x) + model.bias,
                                 row.label});
  }
  return ScoreSet::from_entries(std::move(entries));
}

ExperimentResult run_experiment(const DomainSpec& spec_in,
                                const DomainSpec& spec_outdom,
                                std::size_t n_per_class,
                                const TrainConfig& cfg,
                                std::size_t n_trials) {
  validate(spec_in);
  validate(spec_outdom);
  if (spec_in.dim != spec_outdom.dim) {
    throw ContractError("run_experiment: domain specs must share dim");
  }
  if (n_trials < 1) {
    throw ContractError("run_experiment: n_trials must be >= 1");
  }
  if (n_per_class < 5) {
    throw ContractError("run_experiment: n_per_class too small for an 80/20 split");
  }

  constexpr double kRatio = 0.8;
  ExperimentResult result;
  result.master_seed = cfg.seed;
  result.bayes_eer_in = bayes_eer(spec_in);
  result.bayes_eer_outdom = bayes_eer(spec_outdom);
  result.randomization =
      "per-trial fresh data, fresh 80/20 split, fresh training batch order";

  for (std::size_t trial = 0; trial < n_trials; ++trial) {
    const std::string trial_tag = "t" + std::to_string(trial);
    const FeatureSet data_in =
        gen_domain(spec_in, n_per_class, derive_seed(cfg.seed, trial, kGenIn),
                   "in-" + trial_tag);
    const FeatureSet data_outdom = gen_domain(
        spec_outdom, n_per_class, derive_seed(cfg.seed, trial, kGenOutdom),
        "outdom-" + trial_tag);

    const auto [train_in, test_in] = split_features(
        data_in, kRatio, derive_seed(cfg.seed, trial, kSplitIn),
        data_in.spec_tag);
    const auto [train_outdom, test_outdom] = split_features(
        data_outdom, kRatio, derive_seed(cfg.seed, trial, kSplitOutdom),
        data_outdom.spec_tag);

    TrainConfig cfg_in = cfg;
    cfg_in.seed = derive_seed(cfg.seed, trial, kTrainIn);
    TrainConfig cfg_outdom = cfg;
    cfg_outdom.seed = derive_seed(cfg.seed, trial, kTrainOutdom);

    const ToyModel model_in = train_toy(train_in, cfg_in);
    const ToyModel model_outdom = train_toy(train_outdom, cfg_outdom);

    const double eer_in_in =
        eer(score_toy(model_in, test_in, "synth-" + trial_tag + "-ii")).eer;
    const double eer_outdom_outdom =
        eer(score_toy(model_outdom, test_outdom,
                      "synth-" + trial_tag + "-oo")).eer;
    const double eer_in_out =
        eer(score_toy(model_in, test_outdom, "synth-" + trial_tag + "-io")).eer;

    TrialResult tr;
    tr.gaps = decompose(eer_in_in, eer_outdom_outdom, eer_in_out);
    tr.cells = {EvalCell{"in", "in", eer_in_in},
                EvalCell{"outdom", "outdom", eer_outdom_outdom},
                EvalCell{"in", "outdom", eer_in_out}};
    result.trials.push_back(std::move(tr));
    result.trial_gaps.push_back(result.trials.back().gaps);
  }

  result.aggregates = aggregate_trials(result.trial_gaps);
  return result;
}

}  // namespace gapdecomp
