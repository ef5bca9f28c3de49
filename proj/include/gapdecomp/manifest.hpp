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

#ifndef GAPDECOMP_MANIFEST_HPP_
#define GAPDECOMP_MANIFEST_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

namespace gapdecomp {

enum class Label { bonafide, spoof };

const char* to_string(Label label);

// One utterance of a database: unique id, audio path ("-" for score-only
// workflows), class label, and the tag of the database it belongs to.
struct UtteranceRecord {
  std::string id;
  std::string path;
  Label label = Label::bonafide;
  std::string domain_tag;
};

// Ordered, validated catalog of utterances for one database. Construction
// enforces the invariants: nonempty unique ids, at least one record of each
// class, and a single domain tag shared by every record.
class Manifest {
 public:
  Manifest(std::vector<UtteranceRecord> records, std::string domain_tag);

  const std::vector<UtteranceRecord>& records() const { return records_; }
  const std::string& domain_tag() const { return domain_tag_; }
  std::size_t size() const { return records_.size(); }
  std::size_t count(Label label) const {
    return label == Label::bonafide ? n_bonafide_ : n_spoof_;
  }
  bool contains(const std::string& id) const {
    return index_.find(id) != index_.end();
  }
  // nullptr when the id is unknown.
  const UtteranceRecord* find(const std::string& id) const;

 private:
  std::vector<UtteranceRecord> records_;
  std::string domain_tag_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t n_bonafide_ = 0;
  std::size_t n_spoof_ = 0;
};

// Result of a stratified split. Both id lists preserve manifest order;
// together they cover the manifest exactly and never overlap.
struct Partition {
  std::vector<std::string> train_ids;
  std::vector<std::string> test_ids;
  std::uint64_t seed = 0;
  double ratio = 0.0;
};

// Detector scores bound to labeled utterances. Polarity is fixed throughout:
// higher score means more bonafide. Entries keep the order they were built
// in (manifest order when produced by bind_scores); ids are unique and all
// scores finite.
struct ScoreEntry {
  std::string id;
  double score = 0.0;
  Label label = Label::bonafide;
};

class ScoreSet {
 public:
  static ScoreSet from_entries(std::vector<ScoreEntry> entries);

  const std::vector<ScoreEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::size_t count(Label label) const {
    return label == Label::bonafide ? n_bonafide_ : n_spoof_;
  }

 private:
  ScoreSet() = default;
  std::vector<ScoreEntry> entries_;
  std::size_t n_bonafide_ = 0;
  std::size_t n_spoof_ = 0;
};

// Manifest file format: UTF-8 text, one record per line,
//   <id> \t <path or "-"> \t <bonafide|spoof>
// '#'-prefixed lines are comments; blank lines are skipped. Relative paths
// are rebased onto the manifest's parent directory at load time.
// Errors name the file and line.
Manifest load_manifest(const std::filesystem::path& path,
                       const std::string& domain_tag);

void save_manifest(const Manifest& manifest,
                   const std::filesystem::path& path);

// Stratified random split, deterministic for a fixed (manifest order, ratio,
// seed). Per class: ids are shuffled by a Fisher-Yates pass driven by
// mt19937_64 seeded with derive_seed(seed, class_byte) where class_byte is 0
// for bonafide and 1 for spoof; the first round_half_up(ratio * class_size)
// shuffled ids go to train. A class whose train count would leave either
// side empty is an error.
Partition split(const Manifest& manifest, double ratio, std::uint64_t seed);

// New manifest containing exactly the given ids, in manifest order.
Manifest subset(const Manifest& manifest, const std::vector<std::string>& ids,
                const std::string& domain_tag);

// Score file format: one `<id><whitespace><decimal score>` pair per line.
// Every manifest id must appear exactly once (strict); score-file ids absent
// from the manifest are skipped and counted, not errors.
struct BindStats {
  std::size_t unknown_ids = 0;
};

ScoreSet bind_scores(const Manifest& manifest,
                     const std::filesystem::path& score_path,
                     BindStats* stats = nullptr);

}  // namespace gapdecomp

#endif  // GAPDECOMP_MANIFEST_HPP_
