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
//
// gapdecomp CLI: manifests, scores, EER, gap decomposition, audio
// degradation, and synthetic oracle experiments behind one reproducible
// command-line surface.
//
// Exit codes: 0 success, 2 input/contract error, 3 internal numeric failure.
// stdout carries only the report; diagnostics go to stderr. Every command is
// deterministic given its flags and seed; payloads written with --out are
// byte-identical across reruns.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gapdecomp/audioprep.hpp"
#include "gapdecomp/decomposition.hpp"
#include "gapdecomp/errors.hpp"
#include "gapdecomp/manifest.hpp"
#include "gapdecomp/metrics.hpp"
#include "gapdecomp/report.hpp"
#include "gapdecomp/synthlab.hpp"
#include "gapdecomp/version.hpp"

namespace fs = std::filesystem;
using gapdecomp::ContractError;
using nlohmann::ordered_json;

namespace {

constexpr std::uint64_t kDefaultSeed = 42;

std::string fmt_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void maybe_write_payload(const gapdecomp::RunRecord& record,
                         const std::string& out_path) {
  if (out_path.empty()) return;
  gapdecomp::write_payload(gapdecomp::to_payload(record), out_path);
}

void finish(const gapdecomp::RunRecord& record, bool verbose) {
  if (verbose) {
    std::cerr << "[gapdecomp] " << record.command << " completed at "
              << record.timestamp_utc << "\n";
  }
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

struct EvalOptions {
  std::string manifest_path;
  std::string score_path;
  std::string domain_tag = "dataset";
  std::uint64_t seed = kDefaultSeed;
  std::string out_path;
};

void run_eval(const EvalOptions& opt, bool verbose) {
  const gapdecomp::Manifest manifest =
      gapdecomp::load_manifest(opt.manifest_path, opt.domain_tag);
  gapdecomp::BindStats stats;
  const gapdecomp::ScoreSet scores =
      gapdecomp::bind_scores(manifest, opt.score_path, &stats);
  const gapdecomp::EerResult result = gapdecomp::eer(scores);

  if (stats.unknown_ids > 0) {
    std::cerr << "[gapdecomp] warning: ignored " << stats.unknown_ids
              << " score id(s) not present in the manifest\n";
  }

  std::cout << "EER: " << gapdecomp::format_percent(result.eer) << "%\n";
  std::cout << "threshold: " << fmt_g17(result.threshold) << "\n";
  std::cout << "counts: " << result.n_bonafide << " bonafide, "
            << result.n_spoof << " spoof\n";

  ordered_json config;
  config["manifest"] = opt.manifest_path;
  config["scores"] = opt.score_path;
  config["domain_tag"] = opt.domain_tag;
  auto record = gapdecomp::make_run_record("eval", config, opt.seed);
  record.results["eer"] = result.eer;
  record.results["threshold"] = result.threshold;
  record.results["n_bonafide"] = result.n_bonafide;
  record.results["n_spoof"] = result.n_spoof;
  record.results["unknown_score_ids"] = stats.unknown_ids;
  maybe_write_payload(record, opt.out_path);
  finish(record, verbose);
}

// ---------------------------------------------------------------------------
// decompose
// ---------------------------------------------------------------------------

struct DecomposeOptions {
  // value mode (percent unless --fractions)
  std::optional<double> eer_in;
  std::optional<double> eer_outdom;
  std::optional<double> eer_cross;
  bool fractions = false;
  // score-file mode
  std::string in_manifest, in_scores;
  std::string outdom_manifest, outdom_scores;
  std::string cross_manifest, cross_scores;
  // trial-directory mode
  std::string trials_dir;

  std::string label = "run";
  std::uint64_t seed = kDefaultSeed;
  std::string out_path;
};

double cell_eer_from_files(const std::string& manifest_path,
                           const std::string& score_path,
                           const std::string& tag) {
  const gapdecomp::Manifest manifest =
      gapdecomp::load_manifest(manifest_path, tag);
  gapdecomp::BindStats stats;
  const gapdecomp::ScoreSet scores =
      gapdecomp::bind_scores(manifest, score_path, &stats);
  if (stats.unknown_ids > 0) {
    std::cerr << "[gapdecomp] warning: cell '" << tag << "': ignored "
              << stats.unknown_ids << " unknown score id(s)\n";
  }
  return gapdecomp::eer(scores).eer;
}

std::vector<gapdecomp::GapDecomposition> read_trial_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw ContractError("trial directory '" + dir.string() +
                        "' does not exist");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw ContractError("trial directory '" + dir.string() +
                        "' has no .json trial files");
  }

  std::vector<gapdecomp::GapDecomposition> trials;
  for (const fs::path& file : files) {
    std::ifstream in(file);
    ordered_json j;
    try {
      in >> j;
    } catch (const std::exception& e) {
      throw ContractError("trial file '" + file.string() +
                          "': " + e.what());
    }
    for (const char* key : {"eer_in_in", "eer_outdom_outdom", "eer_in_out"}) {
      if (!j.contains(key) || !j[key].is_number()) {
        throw ContractError("trial file '" + file.string() +
                            "' is missing numeric key '" + key + "'");
      }
    }
    trials.push_back(gapdecomp::decompose(j["eer_in_in"].get<double>(),
                                          j["eer_outdom_outdom"].get<double>(),
                                          j["eer_in_out"].get<double>()));
  }
  return trials;
}

void run_decompose(const DecomposeOptions& opt, bool verbose) {
  const bool value_mode =
      opt.eer_in.has_value() || opt.eer_outdom.has_value() ||
      opt.eer_cross.has_value();
  const bool score_mode = !opt.in_manifest.empty();
  const bool trials_mode = !opt.trials_dir.empty();
  if (static_cast<int>(value_mode) + static_cast<int>(score_mode) +
          static_cast<int>(trials_mode) != 1) {
    throw ContractError(
        "decompose needs exactly one input mode: --eer-* values, score-file "
        "cells, or --trials");
  }

  std::vector<gapdecomp::GapDecomposition> trials;
  if (value_mode) {
    if (!(opt.eer_in && opt.eer_outdom && opt.eer_cross)) {
      throw ContractError(
          "decompose value mode needs --eer-in, --eer-outdom, and --eer-cross");
    }
    const double scale = opt.fractions ? 1.0 : 0.01;
    trials.push_back(gapdecomp::decompose(*opt.eer_in * scale,
                                          *opt.eer_outdom * scale,
                                          *opt.eer_cross * scale));
  } else if (score_mode) {
    if (opt.in_manifest.empty() || opt.in_scores.empty() ||
        opt.outdom_manifest.empty() || opt.outdom_scores.empty() ||
        opt.cross_manifest.empty() || opt.cross_scores.empty()) {
      throw ContractError(
          "decompose score mode needs manifest+scores for all three cells "
          "(in, outdom, cross)");
    }
    const double eer_in_in =
        cell_eer_from_files(opt.in_manifest, opt.in_scores, "cell-in");
    const double eer_outdom_outdom = cell_eer_from_files(
        opt.outdom_manifest, opt.outdom_scores, "cell-outdom");
    const double eer_in_out =
        cell_eer_from_files(opt.cross_manifest, opt.cross_scores, "cell-cross");
    trials.push_back(
        gapdecomp::decompose(eer_in_in, eer_outdom_outdom, eer_in_out));
  } else {
    trials = read_trial_dir(opt.trials_dir);
  }

  const gapdecomp::GapAggregates agg = gapdecomp::aggregate_trials(trials);

  std::vector<gapdecomp::GapTableRow> rows;
  if (trials.size() == 1) {
    rows.push_back({opt.label,
                    gapdecomp::format_percent(trials[0].performance_gap),
                    gapdecomp::format_percent(trials[0].hardness_gap),
                    gapdecomp::format_percent(trials[0].difference_gap)});
  } else {
    for (std::size_t i = 0; i < trials.size(); ++i) {
      rows.push_back({"trial-" + std::to_string(i),
                      gapdecomp::format_percent(trials[i].performance_gap),
                      gapdecomp::format_percent(trials[i].hardness_gap),
                      gapdecomp::format_percent(trials[i].difference_gap)});
    }
    rows.push_back({opt.label + " (mean)",
                    gapdecomp::format_percent_pm(agg.performance_gap.mean,
                                                 agg.performance_gap.std_dev),
                    gapdecomp::format_percent_pm(agg.hardness_gap.mean,
                                                 agg.hardness_gap.std_dev),
                    gapdecomp::format_percent_pm(agg.difference_gap.mean,
                                                 agg.difference_gap.std_dev)});
  }
  std::cout << gapdecomp::render_gap_table(rows);

  ordered_json config;
  config["label"] = opt.label;
  if (value_mode) {
    config["mode"] = "values";
    config["fractions"] = opt.fractions;
    config["eer_in"] = *opt.eer_in;
    config["eer_outdom"] = *opt.eer_outdom;
    config["eer_cross"] = *opt.eer_cross;
  } else if (score_mode) {
    config["mode"] = "scores";
    config["in_manifest"] = opt.in_manifest;
    config["in_scores"] = opt.in_scores;
    config["outdom_manifest"] = opt.outdom_manifest;
    config["outdom_scores"] = opt.outdom_scores;
    config["cross_manifest"] = opt.cross_manifest;
    config["cross_scores"] = opt.cross_scores;
  } else {
    config["mode"] = "trials";
    config["trials_dir"] = opt.trials_dir;
  }
  auto record = gapdecomp::make_run_record("decompose", config, opt.seed);
  record.results["trials"] = ordered_json::array();
  for (const auto& t : trials) {
    record.results["trials"].push_back(gapdecomp::trial_to_json(t));
  }
  record.results["aggregates"] = gapdecomp::aggregates_to_json(agg);
  maybe_write_payload(record, opt.out_path);
  finish(record, verbose);
}

// ---------------------------------------------------------------------------
// split
// ---------------------------------------------------------------------------

struct SplitOptions {
  std::string manifest_path;
  double ratio = 0.8;
  std::uint64_t seed = kDefaultSeed;
  std::string out_prefix;
  std::string domain_tag = "dataset";
  std::string out_path;
};

void run_split(const SplitOptions& opt, bool verbose) {
  const gapdecomp::Manifest manifest =
      gapdecomp::load_manifest(opt.manifest_path, opt.domain_tag);
  const gapdecomp::Partition part =
      gapdecomp::split(manifest, opt.ratio, opt.seed);

  const gapdecomp::Manifest train =
      gapdecomp::subset(manifest, part.train_ids, manifest.domain_tag());
  const gapdecomp::Manifest test =
      gapdecomp::subset(manifest, part.test_ids, manifest.domain_tag());

  const std::string train_path = opt.out_prefix + ".train.tsv";
  const std::string test_path = opt.out_prefix + ".test.tsv";
  gapdecomp::save_manifest(train, train_path);
  gapdecomp::save_manifest(test, test_path);

  using gapdecomp::Label;
  std::cout << "train: " << train.size() << " records ("
            << train.count(Label::bonafide) << " bonafide, "
            << train.count(Label::spoof) << " spoof) -> " << train_path
            << "\n";
  std::cout << "test: " << test.size() << " records ("
            << test.count(Label::bonafide) << " bonafide, "
            << test.count(Label::spoof) << " spoof) -> " << test_path << "\n";

  ordered_json config;
  config["manifest"] = opt.manifest_path;
  config["ratio"] = opt.ratio;
  config["out_prefix"] = opt.out_prefix;
  config["domain_tag"] = opt.domain_tag;
  auto record = gapdecomp::make_run_record("split", config, opt.seed);
  record.results["train_path"] = train_path;
  record.results["test_path"] = test_path;
  record.results["train_ids"] = part.train_ids;
  record.results["test_ids"] = part.test_ids;
  maybe_write_payload(record, opt.out_path);
  finish(record, verbose);
}

// ---------------------------------------------------------------------------
// degrade
// ---------------------------------------------------------------------------

struct DegradeOptions {
  std::string manifest_path;
  double target_s = 0.25;
  std::optional<double> min_s;
  std::uint64_t seed = kDefaultSeed;
  std::string out_dir;
  double frame_ms = 25.0;
  double threshold_db = -40.0;
  std::string domain_tag = "dataset";
  std::string out_path;
};

void run_degrade(const DegradeOptions& opt, bool verbose) {
  const gapdecomp::Manifest manifest =
      gapdecomp::load_manifest(opt.manifest_path, opt.domain_tag);
  gapdecomp::DegradeSpec spec;
  spec.target_duration_s = opt.target_s;
  spec.min_duration_s = opt.min_s;
  spec.seed = opt.seed;
  gapdecomp::TrimConfig trim;
  trim.frame_ms = opt.frame_ms;
  trim.threshold_db = opt.threshold_db;

  const gapdecomp::Manifest degraded =
      gapdecomp::degrade_set(manifest, spec, trim, opt.out_dir);
  const std::string degraded_manifest_path =
      (fs::path(opt.out_dir) / "degraded.tsv").string();
  gapdecomp::save_manifest(degraded, degraded_manifest_path);

  std::cout << "degraded " << degraded.size() << " records -> " << opt.out_dir
            << "\n";
  std::cout << "manifest: " << degraded_manifest_path << " (domain "
            << degraded.domain_tag() << ")\n";

  ordered_json config;
  config["manifest"] = opt.manifest_path;
  config["target_s"] = opt.target_s;
  if (opt.min_s) {
    config["min_s"] = *opt.min_s;
  } else {
    config["min_s"] = nullptr;
  }
  config["out_dir"] = opt.out_dir;
  config["frame_ms"] = opt.frame_ms;
  config["threshold_db"] = opt.threshold_db;
  config["domain_tag"] = opt.domain_tag;
  auto record = gapdecomp::make_run_record("degrade", config, opt.seed);
  record.results["manifest_path"] = degraded_manifest_path;
  record.results["domain_tag"] = degraded.domain_tag();
  record.results["records"] = ordered_json::array();
  for (const auto& rec : degraded.records()) {
    const gapdecomp::AudioClip clip = gapdecomp::read_wav(rec.path);
    ordered_json r;
    r["id"] = rec.id;
    r["path"] = rec.path;
    r["samples"] = clip.samples.size();
    r["sample_rate"] = clip.sample_rate;
    record.results["records"].push_back(r);
  }
  maybe_write_payload(record, opt.out_path);
  finish(record, verbose);
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

struct SynthOptions {
  std::string scenario;
  std::string spec_file;
  std::size_t n_per_class = 10000;
  std::size_t trials = 5;
  std::uint64_t seed = kDefaultSeed;
  std::string trial_dir;
  std::string out_path;
};

struct Scenario {
  std::string name;
  gapdecomp::DomainSpec spec_in;
  gapdecomp::DomainSpec spec_outdom;
  // oracle targets; expected_difference is absent for custom spec files
  double expected_hardness = 0.0;
  std::optional<double> expected_difference;
  double tol_hardness = 0.03;
  double tol_difference = 0.03;
};

gapdecomp::DomainSpec axis_spec(std::size_t dim, std::size_t axis,
                                double sigma) {
  gapdecomp::DomainSpec spec;
  spec.dim = dim;
  spec.sigma = sigma;
  spec.mean_bonafide.assign(dim, 0.0);
  spec.mean_spoof.assign(dim, 0.0);
  spec.mean_bonafide[axis] = 1.0;
  spec.mean_spoof[axis] = -1.0;
  return spec;
}

Scenario preset_scenario(const std::string& name) {
  constexpr std::size_t kDim = 4;
  Scenario sc;
  sc.name = name;
  sc.spec_in = axis_spec(kDim, 0, 1.0);
  if (name == "identical") {
    sc.spec_outdom = axis_spec(kDim, 0, 1.0);
    sc.expected_difference = 0.0;
    sc.tol_hardness = 0.02;
    sc.tol_difference = 0.02;
  } else if (name == "hardness") {
    sc.spec_outdom = axis_spec(kDim, 0, 2.0);
    sc.expected_difference = 0.0;
    sc.tol_hardness = 0.03;
    sc.tol_difference = 0.03;
  } else if (name == "difference") {
    sc.spec_outdom = axis_spec(kDim, 1, 1.0);
    sc.tol_hardness = 0.03;
    sc.tol_difference = 0.05;
  } else if (name == "mixed") {
    sc.spec_outdom = axis_spec(kDim, 1, 2.0);
    sc.tol_hardness = 0.03;
    sc.tol_difference = 0.05;
  } else {
    throw ContractError("unknown scenario '" + name +
                        "' (expected identical, hardness, difference, or "
                        "mixed)");
  }
  sc.expected_hardness =
      gapdecomp::bayes_eer(sc.spec_outdom) - gapdecomp::bayes_eer(sc.spec_in);
  if (!sc.expected_difference) {
    // means on orthogonal axes: an in-domain-trained direction carries no
    // label information in the out-of-domain space, so the cross cell sits
    // at chance
    sc.expected_difference = 0.5 - gapdecomp::bayes_eer(sc.spec_outdom);
  }
  return sc;
}

std::vector<double> parse_vector(const std::string& text,
                                 const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    try {
      std::size_t consumed = 0;
      out.push_back(std::stod(token, &consumed));
      if (consumed != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw ContractError("spec file: malformed number '" + token +
                          "' in key '" + key + "'");
    }
  }
  if (out.empty()) {
    throw ContractError("spec file: empty vector for key '" + key + "'");
  }
  return out;
}

// Custom two-domain description: `key = value` lines, '#' comments.
// Keys: dim, in.mean_bonafide, in.mean_spoof, in.sigma, outdom.mean_bonafide,
// outdom.mean_spoof, outdom.sigma. Vectors are comma-separated.
Scenario load_scenario_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in.good()) {
    throw ContractError("cannot open spec file '" + path.string() + "'");
  }
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ContractError(path.string() + ":" + std::to_string(line_no) +
                          ": expected 'key = value'");
    }
    auto strip = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    kv[strip(line.substr(0, eq))] = strip(line.substr(eq + 1));
  }

  auto need = [&](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) {
      throw ContractError("spec file '" + path.string() +
                          "' is missing key '" + key + "'");
    }
    return it->second;
  };

  Scenario sc;
  sc.name = "custom:" + path.filename().string();
  const auto dim = static_cast<std::size_t>(std::stoul(need("dim")));
  for (auto* domain : {&sc.spec_in, &sc.spec_outdom}) {
    const std::string prefix = domain == &sc.spec_in ? "in." : "outdom.";
    domain->dim = dim;
    domain->mean_bonafide = parse_vector(need(prefix + "mean_bonafide"),
                                         prefix + "mean_bonafide");
    domain->mean_spoof =
        parse_vector(need(prefix + "mean_spoof"), prefix + "mean_spoof");
    domain->sigma = std::stod(need(prefix + "sigma"));
  }
  gapdecomp::validate(sc.spec_in);
  gapdecomp::validate(sc.spec_outdom);
  sc.expected_hardness =
      gapdecomp::bayes_eer(sc.spec_outdom) - gapdecomp::bayes_eer(sc.spec_in);
  sc.expected_difference = std::nullopt;  // no transfer oracle for custom specs
  return sc;
}

void run_synth(const SynthOptions& opt, bool verbose) {
  if (opt.scenario.empty() == opt.spec_file.empty()) {
    throw ContractError("synth needs exactly one of --scenario or --spec");
  }
  const Scenario sc = opt.spec_file.empty()
                          ? preset_scenario(opt.scenario)
                          : load_scenario_file(opt.spec_file);

  gapdecomp::TrainConfig cfg;
  cfg.seed = opt.seed;
  const gapdecomp::ExperimentResult result = gapdecomp::run_experiment(
      sc.spec_in, sc.spec_outdom, opt.n_per_class, cfg, opt.trials);

  if (!opt.trial_dir.empty()) {
    fs::create_directories(opt.trial_dir);
    for (std::size_t i = 0; i < result.trial_gaps.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "trial-%03zu.json", i);
      gapdecomp::write_payload(gapdecomp::trial_to_json(result.trial_gaps[i]),
                               fs::path(opt.trial_dir) / name);
    }
  }

  std::vector<gapdecomp::GapTableRow> rows;
  for (std::size_t i = 0; i < result.trial_gaps.size(); ++i) {
    const auto& t = result.trial_gaps[i];
    rows.push_back({"trial-" + std::to_string(i),
                    gapdecomp::format_percent(t.performance_gap),
                    gapdecomp::format_percent(t.hardness_gap),
                    gapdecomp::format_percent(t.difference_gap)});
  }
  const auto& agg = result.aggregates;
  rows.push_back({sc.name + " (mean)",
                  gapdecomp::format_percent_pm(agg.performance_gap.mean,
                                               agg.performance_gap.std_dev),
                  gapdecomp::format_percent_pm(agg.hardness_gap.mean,
                                               agg.hardness_gap.std_dev),
                  gapdecomp::format_percent_pm(agg.difference_gap.mean,
                                               agg.difference_gap.std_dev)});

  std::cout << "scenario: " << sc.name << "\n";
  std::cout << "n_per_class: " << opt.n_per_class
            << ", trials: " << opt.trials << ", seed: " << opt.seed << "\n\n";
  std::cout << gapdecomp::render_gap_table(rows) << "\n";
  std::cout << "bayes EER: in-domain "
            << gapdecomp::format_percent(result.bayes_eer_in)
            << "%, out-of-domain "
            << gapdecomp::format_percent(result.bayes_eer_outdom) << "%\n";

  const double h_err = std::abs(agg.hardness_gap.mean - sc.expected_hardness);
  const bool h_pass = h_err <= sc.tol_hardness;
  std::cout << "oracle hardness gap: expected "
            << gapdecomp::format_percent(sc.expected_hardness)
            << "% (tol " << gapdecomp::format_percent(sc.tol_hardness)
            << "), observed "
            << gapdecomp::format_percent(agg.hardness_gap.mean) << "% -> "
            << (h_pass ? "PASS" : "FAIL") << "\n";

  bool d_pass = true;
  if (sc.expected_difference) {
    const double d_err =
        std::abs(agg.difference_gap.mean - *sc.expected_difference);
    d_pass = d_err <= sc.tol_difference;
    std::cout << "oracle difference gap: expected "
              << gapdecomp::format_percent(*sc.expected_difference)
              << "% (tol " << gapdecomp::format_percent(sc.tol_difference)
              << "), observed "
              << gapdecomp::format_percent(agg.difference_gap.mean) << "% -> "
              << (d_pass ? "PASS" : "FAIL") << "\n";
  } else {
    std::cout << "oracle difference gap: n/a for custom specs, observed "
              << gapdecomp::format_percent(agg.difference_gap.mean) << "%\n";
  }

  std::string verdict;
  const double perf = agg.performance_gap.mean;
  if (std::abs(perf) < 0.02) {
    verdict = "no meaningful gap";
  } else if (agg.hardness_gap.mean / perf >= 0.8) {
    verdict = "hardness-dominated";
  } else if (agg.difference_gap.mean / perf >= 0.8) {
    verdict = "difference-dominated";
  } else {
    verdict = "mixed";
  }
  std::cout << "verdict: " << verdict << "\n";
  std::cout << "overall: " << (h_pass && d_pass ? "PASS" : "FAIL") << "\n";

  ordered_json config;
  config["scenario"] = sc.name;
  config["spec_file"] = opt.spec_file;
  config["n_per_class"] = opt.n_per_class;
  config["trials"] = opt.trials;
  config["trial_dir"] = opt.trial_dir;
  auto record = gapdecomp::make_run_record("synth", config, opt.seed);
  record.results["randomization"] = result.randomization;
  record.results["bayes_eer_in"] = result.bayes_eer_in;
  record.results["bayes_eer_outdom"] = result.bayes_eer_outdom;
  record.results["expected_hardness_gap"] = sc.expected_hardness;
  if (sc.expected_difference) {
    record.results["expected_difference_gap"] = *sc.expected_difference;
  } else {
    record.results["expected_difference_gap"] = nullptr;
  }
  record.results["verdict"] = verdict;
  record.results["oracle_pass"] = h_pass && d_pass;
  record.results["trials"] = ordered_json::array();
  for (const auto& t : result.trial_gaps) {
    record.results["trials"].push_back(gapdecomp::trial_to_json(t));
  }
  record.results["aggregates"] = gapdecomp::aggregates_to_json(agg);
  maybe_write_payload(record, opt.out_path);
  finish(record, verbose);
}

// ---------------------------------------------------------------------------
// scatter
// ---------------------------------------------------------------------------

struct ScatterOptions {
  std::vector<std::string> points;  // "tag,eer_in,eer_out" fractions
  std::string csv_path;
  std::uint64_t seed = kDefaultSeed;
  std::string out_path;
};

void run_scatter(const ScatterOptions& opt, bool verbose) {
  if (opt.points.empty()) {
    throw ContractError("scatter needs at least one --point tag,in,out");
  }
  std::vector<gapdecomp::ScatterCell> cells;
  for (const std::string& p : opt.points) {
    const auto c1 = p.find(',');
    const auto c2 = c1 == std::string::npos ? std::string::npos
                                            : p.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
      throw ContractError("malformed --point '" + p +
                          "' (expected tag,eer_in,eer_out)");
    }
    gapdecomp::ScatterCell cell;
    cell.model_tag = p.substr(0, c1);
    try {
      cell.eer_in_in = std::stod(p.substr(c1 + 1, c2 - c1 - 1));
      cell.eer_in_out = std::stod(p.substr(c2 + 1));
    } catch (const std::exception&) {
      throw ContractError("malformed --point '" + p + "': bad number");
    }
    cells.push_back(std::move(cell));
  }

  const auto rows = gapdecomp::scatter_table(cells);
  std::string csv = "model_tag,eer_in_in,eer_in_out,diagonal\n";
  for (const auto& row : rows) {
    csv += row.model_tag + "," + fmt_g17(row.eer_in_in) + "," +
           fmt_g17(row.eer_in_out) + "," + fmt_g17(row.diagonal) + "\n";
  }
  std::cout << csv;
  if (!opt.csv_path.empty()) {
    std::ofstream out(opt.csv_path, std::ios::binary | std::ios::trunc);
    if (!out.good()) {
      throw ContractError("cannot write csv file '" + opt.csv_path + "'");
    }
    out << csv;
  }

  ordered_json config;
  config["points"] = opt.points;
  config["csv"] = opt.csv_path;
  auto record = gapdecomp::make_run_record("scatter", config, opt.seed);
  record.results["rows"] = ordered_json::array();
  for (const auto& row : rows) {
    ordered_json r;
    r["model_tag"] = row.model_tag;
    r["eer_in_in"] = row.eer_in_in;
    r["eer_in_out"] = row.eer_in_out;
    r["diagonal"] = row.diagonal;
    record.results["rows"].push_back(r);
  }
  maybe_write_payload(record, opt.out_path);
  finish(record, verbose);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gapdecomp: EER metrics and in-domain vs out-of-domain "
               "performance gap decomposition"};
  app.set_version_flag("--version", gapdecomp::kToolVersion);
  app.set_config("--config", "", "Read options from an INI config file");
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("--verbose", verbose, "Progress diagnostics on stderr");

  EvalOptions eval_opt;
  auto* eval_cmd =
      app.add_subcommand("eval", "EER of a score file bound to a manifest");
  eval_cmd->add_option("--manifest", eval_opt.manifest_path)->required();
  eval_cmd->add_option("--scores", eval_opt.score_path)->required();
  eval_cmd->add_option("--domain-tag", eval_opt.domain_tag);
  eval_cmd->add_option("--seed", eval_opt.seed);
  eval_cmd->add_option("--out", eval_opt.out_path, "Write JSON payload here");

  DecomposeOptions dec_opt;
  auto* dec_cmd = app.add_subcommand(
      "decompose", "Performance/hardness/difference gaps from three cells");
  double eer_in_val = 0, eer_outdom_val = 0, eer_cross_val = 0;
  auto* in_opt = dec_cmd->add_option("--eer-in", eer_in_val,
                                     "D->D EER (percent unless --fractions)");
  auto* outdom_opt = dec_cmd->add_option("--eer-outdom", eer_outdom_val,
                                         "D'->D' EER");
  auto* cross_opt = dec_cmd->add_option("--eer-cross", eer_cross_val,
                                        "D->D' EER");
  dec_cmd->add_flag("--fractions", dec_opt.fractions,
                    "EER values are fractions in [0,1], not percents");
  dec_cmd->add_option("--in-manifest", dec_opt.in_manifest);
  dec_cmd->add_option("--in-scores", dec_opt.in_scores);
  dec_cmd->add_option("--outdom-manifest", dec_opt.outdom_manifest);
  dec_cmd->add_option("--outdom-scores", dec_opt.outdom_scores);
  dec_cmd->add_option("--cross-manifest", dec_opt.cross_manifest);
  dec_cmd->add_option("--cross-scores", dec_opt.cross_scores);
  dec_cmd->add_option("--trials", dec_opt.trials_dir,
                      "Directory of per-trial .json cell files");
  dec_cmd->add_option("--label", dec_opt.label);
  dec_cmd->add_option("--seed", dec_opt.seed);
  dec_cmd->add_option("--out", dec_opt.out_path);

  SplitOptions split_opt;
  auto* split_cmd =
      app.add_subcommand("split", "Stratified train/test manifest split");
  split_cmd->add_option("--manifest", split_opt.manifest_path)->required();
  split_cmd->add_option("--ratio", split_opt.ratio);
  split_cmd->add_option("--seed", split_opt.seed);
  split_cmd->add_option("--out-prefix", split_opt.out_prefix)->required();
  split_cmd->add_option("--domain-tag", split_opt.domain_tag);
  split_cmd->add_option("--out", split_opt.out_path);

  DegradeOptions deg_opt;
  auto* deg_cmd = app.add_subcommand(
      "degrade", "Trim silence, truncate randomly, optionally tile");
  deg_cmd->add_option("--manifest", deg_opt.manifest_path)->required();
  deg_cmd->add_option("--target", deg_opt.target_s, "Target duration (s)");
  double min_s_val = 0;
  auto* min_opt =
      deg_cmd->add_option("--min", min_s_val, "Tile to this minimum (s)");
  deg_cmd->add_option("--seed", deg_opt.seed);
  deg_cmd->add_option("--out-dir", deg_opt.out_dir)->required();
  deg_cmd->add_option("--frame-ms", deg_opt.frame_ms);
  deg_cmd->add_option("--threshold-db", deg_opt.threshold_db);
  deg_cmd->add_option("--domain-tag", deg_opt.domain_tag);
  deg_cmd->add_option("--out", deg_opt.out_path);

  SynthOptions synth_opt;
  auto* synth_cmd = app.add_subcommand(
      "synth", "Synthetic two-domain experiment with analytic oracles");
  synth_cmd->add_option("--scenario", synth_opt.scenario,
                        "identical | hardness | difference | mixed");
  synth_cmd->add_option("--spec", synth_opt.spec_file,
                        "Custom two-domain spec file");
  synth_cmd->add_option("--n", synth_opt.n_per_class, "Samples per class");
  synth_cmd->add_option("--trials", synth_opt.trials);
  synth_cmd->add_option("--seed", synth_opt.seed);
  synth_cmd->add_option("--trial-dir", synth_opt.trial_dir,
                        "Write per-trial cell files here");
  synth_cmd->add_option("--out", synth_opt.out_path);

  ScatterOptions scatter_opt;
  auto* scatter_cmd = app.add_subcommand(
      "scatter", "In-domain vs out-of-domain EER scatter data (CSV)");
  scatter_cmd->add_option("--point", scatter_opt.points,
                          "tag,eer_in,eer_out with EERs as fractions");
  scatter_cmd->add_option("--csv", scatter_opt.csv_path);
  scatter_cmd->add_option("--seed", scatter_opt.seed);
  scatter_cmd->add_option("--out", scatter_opt.out_path);

  try {
    app.parse(argc, argv);

    if (in_opt->count()) dec_opt.eer_in = eer_in_val;
    if (outdom_opt->count()) dec_opt.eer_outdom = eer_outdom_val;
    if (cross_opt->count()) dec_opt.eer_cross = eer_cross_val;
    if (min_opt->count()) deg_opt.min_s = min_s_val;

    if (app.got_subcommand(eval_cmd)) {
      run_eval(eval_opt, verbose);
    } else if (app.got_subcommand(dec_cmd)) {
      run_decompose(dec_opt, verbose);
    } else if (app.got_subcommand(split_cmd)) {
      run_split(split_opt, verbose);
    } else if (app.got_subcommand(deg_cmd)) {
      run_degrade(deg_opt, verbose);
    } else if (app.got_subcommand(synth_cmd)) {
      run_synth(synth_opt, verbose);
    } else if (app.got_subcommand(scatter_cmd)) {
      run_scatter(scatter_opt, verbose);
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ContractError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const gapdecomp::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
