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

#include "gapdecomp/manifest.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "gapdecomp/errors.hpp"
#include "gapdecomp/rng.hpp"

namespace gapdecomp {

namespace {

std::string location(const std::filesystem::path& path, std::size_t line_no) {
  return path.string() + ":" + std::to_string(line_no);
}

Label parse_label(const std::string& token, const std::filesystem::path& path,
                  std::size_t line_no) {
  if (token == "bonafide") return Label::bonafide;
  if (token == "spoof") return Label::spoof;
  throw ContractError(location(path, line_no) + ": unknown label '" + token +
                      "' (expected bonafide or spoof)");
}

}  // namespace

const char* to_string(Label label) {
  return label == Label::bonafide ? "bonafide" : "spoof";
}

Manifest::Manifest(std::vector<UtteranceRecord> records,
                   std::string domain_tag)
    : records_(std::move(records)), domain_tag_(std::move(domain_tag)) {
  index_.reserve(records_.size());
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const UtteranceRecord& rec = records_[i];
    if (rec.id.empty()) {
      throw ContractError("manifest '" + domain_tag_ + "': empty record id");
    }
    if (!rec.domain_tag.empty() && rec.domain_tag != domain_tag_) {
      throw ContractError("manifest '" + domain_tag_ + "': record '" + rec.id +
                          "' carries domain tag '" + rec.domain_tag + "'");
    }
    if (!index_.emplace(rec.id, i).second) {
      throw ContractError("manifest '" + domain_tag_ + "': duplicate id '" +
                          rec.id + "'");
    }
    if (rec.label == Label::bonafide) {
      ++n_bonafide_;
    } else {
      ++n_spoof_;
    }
    records_[i].domain_tag = domain_tag_;
  }
  if (n_bonafide_ == 0 || n_spoof_ == 0) {
    throw ContractError("manifest '" + domain_tag_ +
                        "': both classes required, got " +
                        std::to_string(n_bonafide_) + " bonafide and " +
                        std::to_string(n_spoof_) + " spoof");
  }
}

const UtteranceRecord* Manifest::find(const std::string& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &records_[it->second];
}

ScoreSet ScoreSet::from_entries(std::vector<ScoreEntry> entries) {
  ScoreSet set;
  std::unordered_set<std::string> seen;
  seen.reserve(entries.size());
  for (const ScoreEntry& e : entries) {
    if (e.id.empty()) throw ContractError("score set: empty id");
    if (!seen.insert(e.id).second) {
      throw ContractError("score set: duplicate id '" + e.id + "'");
    }
    if (!std::isfinite(e.score)) {
      throw ContractError("score set: non-finite score for id '" + e.id + "'");
    }
    if (e.label == Label::bonafide) {
      ++set.n_bonafide_;
    } else {
      ++set.n_spoof_;
    }
  }
  set.entries_ = std::move(entries);
  return set;
}

Manifest load_manifest(const std::filesystem::path& path,
                       const std::string& domain_tag) {
  std::ifstream in(path);
  if (!in.good()) {
    throw ContractError("cannot open manifest file '" + path.string() + "'");
  }
  const std::filesystem::path base = path.parent_path();

  std::vector<UtteranceRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;

    const auto tab1 = line.find('\t');
    const auto tab2 = tab1 == std::string::npos
                          ? std::string::npos
                          : line.find('\t', tab1 + 1);
    if (tab1 == std::string::npos || tab2 == std::string::npos ||
        line.find('\t', tab2 + 1) != std::string::npos) {
      throw ContractError(location(path, line_no) +
                          ": expected 3 tab-separated fields");
    }
    UtteranceRecord rec;
    rec.id = line.substr(0, tab1);
    rec.path = line.substr(tab1 + 1, tab2 - tab1 - 1);
    rec.label = parse_label(line.substr(tab2 + 1), path, line_no);
    rec.domain_tag = domain_tag;
    if (rec.id.empty()) {
      throw ContractError(location(path, line_no) + ": empty id field");
    }
    if (rec.path.empty()) {
      throw ContractError(location(path, line_no) + ": empty path field");
    }
    if (rec.path != "-" &&
        std::filesystem::path(rec.path).is_relative() && !base.empty()) {
      rec.path = (base / rec.path).string();
    }
    records.push_back(std::move(rec));
  }
  if (records.empty()) {
    throw ContractError("manifest file '" + path.string() + "' has no records");
  }
  try {
    return Manifest(std::move(records), domain_tag);
  } catch (const ContractError& e) {
    throw ContractError("manifest file '" + path.string() + "': " + e.what());
  }
}

void save_manifest(const Manifest& manifest,
                   const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out.good()) {
    throw ContractError("cannot write manifest file '" + path.string() + "'");
  }
  for (const UtteranceRecord& rec : manifest.records()) {
    out << rec.id << '\t' << rec.path << '\t' << to_string(rec.label) << '\n';
  }
  if (!out.good()) {
    throw ContractError("write failed for manifest file '" + path.string() +
                        "'");
  }
}

Partition split(const Manifest& manifest, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw ContractError("split ratio must be in (0, 1), got " +
                        std::to_string(ratio));
  }

  std::unordered_set<std::string> train_members;
  for (int class_byte = 0; class_byte < 2; ++class_byte) {
    const Label label = class_byte == 0 ? Label::bonafide : Label::spoof;
    std::vector<std::string> ids;
    for (const UtteranceRecord& rec : manifest.records()) {
      if (rec.label == label) ids.push_back(rec.id);
    }
    const std::size_t n = ids.size();
    // round-half-up train count; anything leaving a side empty is an error.
    const auto train_count =
        static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n) + 0.5));
    if (n < 2 || train_count < 1 || train_count > n - 1) {
      throw ContractError(std::string("class '") + to_string(label) +
                          "' too small to place >=1 record on each side (" +
                          std::to_string(n) + " records at ratio " +
                          std::to_string(ratio) + ")");
    }
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(class_byte)));
    rng.shuffle(ids);
    for (std::size_t i = 0; i < train_count; ++i) {
      train_members.insert(std::move(ids[i]));
    }
  }

  Partition part;
  part.seed = seed;
  part.ratio = ratio;
  for (const UtteranceRecord& rec : manifest.records()) {
    if (train_members.count(rec.id)) {
      part.train_ids.push_back(rec.id);
    } else {
      part.test_ids.push_back(rec.id);
    }
  }
  return part;
}

Manifest subset(const Manifest& manifest, const std::vector<std::string>& ids,
                const std::string& domain_tag) {
  std::unordered_set<std::string> wanted(ids.begin(), ids.end());
  std::vector<UtteranceRecord> records;
  records.reserve(ids.size());
  for (const UtteranceRecord& rec : manifest.records()) {
    if (wanted.count(rec.id)) {
      UtteranceRecord copy = rec;
      copy.domain_tag = domain_tag;
      records.push_back(std::move(copy));
    }
  }
  if (records.size() != wanted.size()) {
    throw ContractError("subset: " +
                        std::to_string(wanted.size() - records.size()) +
                        " id(s) not present in manifest");
  }
  return Manifest(std::move(records), domain_tag);
}

ScoreSet bind_scores(const Manifest& manifest,
                     const std::filesystem::path& score_path,
                     BindStats* stats) {
  std::ifstream in(score_path);
  if (!in.good()) {
    throw ContractError("cannot open score file '" + score_path.string() +
                        "'");
  }

  std::unordered_map<std::string, double> scores;
  std::size_t unknown = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::istringstream iss(line);
    std::string id, score_token, extra;
    if (!(iss >> id >> score_token) || (iss >> extra)) {
      throw ContractError(location(score_path, line_no) +
                          ": expected '<id> <score>'");
    }
    std::size_t consumed = 0;
    double score = 0.0;
    try {
      score = std::stod(score_token, &consumed);
    } catch (const std::exception&) {
      consumed = 0;
    }
    if (consumed != score_token.size()) {
      throw ContractError(location(score_path, line_no) +
                          ": malformed score '" + score_token + "'");
    }
    if (!manifest.contains(id)) {
      ++unknown;
      continue;
    }
    if (!std::isfinite(score)) {
      throw ContractError(location(score_path, line_no) +
                          ": non-finite score for id '" + id + "'");
    }
    if (!scores.emplace(id, score).second) {
      throw ContractError(location(score_path, line_no) +
                          ": duplicate score for id '" + id + "'");
    }
  }

  std::vector<ScoreEntry> entries;
  entries.reserve(manifest.size());
  for (const UtteranceRecord& rec : manifest.records()) {
    auto it = scores.find(rec.id);
    if (it == scores.end()) {
      throw ContractError("score file '" + score_path.string() +
                          "' is missing id '" + rec.id + "'");
    }
    entries.push_back(ScoreEntry{rec.id, it->second, rec.label});
  }
  if (stats != nullptr) stats->unknown_ids = unknown;
  return ScoreSet::from_entries(std::move(entries));
}

}  // namespace gapdecomp
