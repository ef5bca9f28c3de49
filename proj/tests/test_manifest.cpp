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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "gapdecomp/errors.hpp"
#include "gapdecomp/manifest.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using gapdecomp::bind_scores;
using gapdecomp::ContractError;
using gapdecomp::Label;
using gapdecomp::load_manifest;
using gapdecomp::Manifest;
using gapdecomp::Partition;
using gapdecomp::split;
using gapdecomp::UtteranceRecord;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("gapdecomp-test-" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  fs::path file(const std::string& name, const std::string& content) const {
    const fs::path p = path / name;
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p;
  }
};

Manifest make_manifest(std::size_t n_bonafide, std::size_t n_spoof,
                       const std::string& tag = "synthetic") {
  std::vector<UtteranceRecord> records;
  for (std::size_t i = 0; i < n_bonafide; ++i) {
    records.push_back({"b" + std::to_string(i), "-", Label::bonafide, tag});
  }
  for (std::size_t i = 0; i < n_spoof; ++i) {
    records.push_back({"s" + std::to_string(i), "-", Label::spoof, tag});
  }
  return Manifest(std::move(records), tag);
}

}  // namespace

TEST_CASE("load_manifest parses a small file and keeps row order") {
  TempDir tmp;
  const auto p = tmp.file("m.tsv",
                          "# demo manifest\n"
                          "u1\tclips/u1.wav\tbonafide\n"
                          "u2\t-\tspoof\n"
                          "\n"
                          "u3\t/abs/u3.wav\tbonafide\n"
                          "u4\tclips/u4.wav\tspoof\n");
  const Manifest m = load_manifest(p, "demo");
  REQUIRE(m.size() == 4);
  CHECK(m.domain_tag() == "demo");
  CHECK(m.records()[0].id == "u1");
  CHECK(m.records()[1].id == "u2");
  CHECK(m.records()[3].id == "u4");
  CHECK(m.count(Label::bonafide) == 2);
  CHECK(m.count(Label::spoof) == 2);
  // relative paths rebase onto the manifest directory; "-" and absolute stay
  CHECK(m.records()[0].path == (tmp.path / "clips/u1.wav").string());
  CHECK(m.records()[1].path == "-");
  CHECK(m.records()[2].path == "/abs/u3.wav");
}

TEST_CASE("load_manifest rejects duplicate ids") {
  TempDir tmp;
  const auto p = tmp.file("m.tsv",
                          "u1\t-\tbonafide\n"
                          "u1\t-\tspoof\n");
  CHECK_THROWS_WITH_AS(load_manifest(p, "demo"),
                       doctest::Contains("duplicate id 'u1'"), ContractError);
}

TEST_CASE("load_manifest rejects single-class files") {
  TempDir tmp;
  const auto p = tmp.file("m.tsv",
                          "u1\t-\tspoof\n"
                          "u2\t-\tspoof\n");
  CHECK_THROWS_WITH_AS(load_manifest(p, "demo"),
                       doctest::Contains("both classes"), ContractError);
}

TEST_CASE("load_manifest names file and line on parse errors") {
  TempDir tmp;
  SUBCASE("wrong field count") {
    const auto p = tmp.file("m.tsv", "u1\tbonafide\n");
    CHECK_THROWS_WITH_AS(load_manifest(p, "demo"), doctest::Contains(":1:"),
                         ContractError);
  }
  SUBCASE("unknown label") {
    const auto p = tmp.file("m.tsv",
                            "u1\t-\tbonafide\n"
                            "u2\t-\tspoofy\n");
    CHECK_THROWS_WITH_AS(load_manifest(p, "demo"),
                         doctest::Contains("unknown label 'spoofy'"),
                         ContractError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_manifest(tmp.path / "absent.tsv", "demo"),
                    ContractError);
  }
}

TEST_CASE("save/load round-trips a manifest") {
  TempDir tmp;
  const Manifest m = make_manifest(3, 2);
  const fs::path p = tmp.path / "out.tsv";
  gapdecomp::save_manifest(m, p);
  const Manifest loaded = load_manifest(p, "synthetic");
  REQUIRE(loaded.size() == m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    CHECK(loaded.records()[i].id == m.records()[i].id);
    CHECK(loaded.records()[i].label == m.records()[i].label);
  }
}

TEST_CASE("split produces the 8/2 stratified example") {
  const Manifest m = make_manifest(5, 5);
  const Partition part = split(m, 0.8, 11);
  CHECK(part.train_ids.size() == 8);
  CHECK(part.test_ids.size() == 2);

  std::size_t train_bona = 0, test_bona = 0;
  for (const auto& id : part.train_ids) train_bona += id[0] == 'b' ? 1 : 0;
  for (const auto& id : part.test_ids) test_bona += id[0] == 'b' ? 1 : 0;
  CHECK(train_bona == 4);
  CHECK(test_bona == 1);
}

TEST_CASE("split is deterministic for a fixed seed") {
  const Manifest m = make_manifest(7, 9);
  const Partition a = split(m, 0.8, 99);
  const Partition b = split(m, 0.8, 99);
  CHECK(a.train_ids == b.train_ids);
  CHECK(a.test_ids == b.test_ids);

  const Partition c = split(m, 0.8, 100);
  CHECK(a.train_ids != c.train_ids);
}

TEST_CASE("split membership matches the reference shuffle") {
  const Manifest m = make_manifest(60, 40);
  const Partition part = split(m, 0.8, 7);

  std::set<std::string> train(part.train_ids.begin(), part.train_ids.end());
  std::size_t train_bona = 0;
  for (const auto& id : part.train_ids) train_bona += id[0] == 'b' ? 1 : 0;
  CHECK(train_bona == 48);
  CHECK(part.train_ids.size() - train_bona == 32);

  std::vector<std::string> bona_ids, spoof_ids;
  for (const auto& rec : m.records()) {
    (rec.label == Label::bonafide ? bona_ids : spoof_ids).push_back(rec.id);
  }
  const auto expect_bona = oracles::ref_class_train_ids(bona_ids, 0.8, 7, 0);
  const auto expect_spoof = oracles::ref_class_train_ids(spoof_ids, 0.8, 7, 1);
  std::set<std::string> expected(expect_bona.begin(), expect_bona.end());
  expected.insert(expect_spoof.begin(), expect_spoof.end());
  CHECK(train == expected);
}

TEST_CASE("split refuses classes that cannot keep a record on each side") {
  SUBCASE("one-record class") {
    CHECK_THROWS_WITH_AS(split(make_manifest(1, 5), 0.5, 1),
                         doctest::Contains("too small"), ContractError);
  }
  SUBCASE("ratio rounds a 4-record class onto one side") {
    CHECK_THROWS_WITH_AS(split(make_manifest(4, 100), 0.99, 1),
                         doctest::Contains("too small"), ContractError);
  }
  SUBCASE("ratio out of range") {
    CHECK_THROWS_AS(split(make_manifest(5, 5), 1.0, 1), ContractError);
    CHECK_THROWS_AS(split(make_manifest(5, 5), 0.0, 1), ContractError);
  }
}

TEST_CASE("split is a stratified partition for random inputs") {
  std::mt19937_64 engine(606);
  std::uniform_int_distribution<std::size_t> size_dist(2, 80);
  std::uniform_real_distribution<double> ratio_dist(0.05, 0.95);

  for (int iter = 0; iter < 200; ++iter) {
    const std::size_t n_b = size_dist(engine);
    const std::size_t n_s = size_dist(engine);
    const double ratio = ratio_dist(engine);
    const Manifest m = make_manifest(n_b, n_s);

    Partition part;
    try {
      part = split(m, ratio, engine());
    } catch (const ContractError&) {
      // legal outcome only when rounding pins a class to one side
      const auto k_b = std::floor(ratio * static_cast<double>(n_b) + 0.5);
      const auto k_s = std::floor(ratio * static_cast<double>(n_s) + 0.5);
      CHECK((k_b < 1 || k_b > n_b - 1 || k_s < 1 || k_s > n_s - 1));
      continue;
    }

    // disjoint cover of all ids
    std::set<std::string> seen;
    for (const auto& id : part.train_ids) CHECK(seen.insert(id).second);
    for (const auto& id : part.test_ids) CHECK(seen.insert(id).second);
    CHECK(seen.size() == m.size());

    // per-class train fraction within 1/class_size of the ratio
    std::size_t train_bona = 0, train_spoof = 0;
    for (const auto& id : part.train_ids) {
      (id[0] == 'b' ? train_bona : train_spoof) += 1;
    }
    const double frac_b = static_cast<double>(train_bona) / n_b;
    const double frac_s = static_cast<double>(train_spoof) / n_s;
    CHECK(std::abs(frac_b - ratio) < 1.0 / static_cast<double>(n_b));
    CHECK(std::abs(frac_s - ratio) < 1.0 / static_cast<double>(n_s));
  }
}

TEST_CASE("bind_scores binds manifest ids to scores with labels") {
  TempDir tmp;
  const auto mp = tmp.file("m.tsv",
                           "u1\t-\tbonafide\n"
                           "u2\t-\tspoof\n");
  const auto sp = tmp.file("s.txt",
                           "u1 0.9\n"
                           "u2 0.1\n");
  const Manifest m = load_manifest(mp, "demo");
  gapdecomp::BindStats stats;
  const auto scores = bind_scores(m, sp, &stats);
  REQUIRE(scores.size() == 2);
  CHECK(stats.unknown_ids == 0);
  CHECK(scores.entries()[0].id == "u1");
  CHECK(scores.entries()[0].score == 0.9);
  CHECK(scores.entries()[0].label == Label::bonafide);
  CHECK(scores.entries()[1].label == Label::spoof);
}

TEST_CASE("bind_scores errors name the missing id") {
  TempDir tmp;
  const auto mp = tmp.file("m.tsv",
                           "u1\t-\tbonafide\n"
                           "u2\t-\tspoof\n");
  const auto sp = tmp.file("s.txt", "u1 0.9\n");
  const Manifest m = load_manifest(mp, "demo");
  CHECK_THROWS_WITH_AS(bind_scores(m, sp, nullptr),
                       doctest::Contains("missing id 'u2'"), ContractError);
}

TEST_CASE("bind_scores counts unknown ids instead of failing") {
  TempDir tmp;
  const auto mp = tmp.file("m.tsv",
                           "u1\t-\tbonafide\n"
                           "u2\t-\tspoof\n");
  const auto sp = tmp.file("s.txt",
                           "u1 0.9\n"
                           "u2 0.1\n"
                           "u3 0.5\n");
  const Manifest m = load_manifest(mp, "demo");
  gapdecomp::BindStats stats;
  const auto scores = bind_scores(m, sp, &stats);
  CHECK(scores.size() == 2);
  CHECK(stats.unknown_ids == 1);
}

TEST_CASE("bind_scores rejects non-finite and duplicate scores") {
  TempDir tmp;
  const auto mp = tmp.file("m.tsv",
                           "u1\t-\tbonafide\n"
                           "u2\t-\tspoof\n");
  const Manifest m = load_manifest(mp, "demo");

  SUBCASE("nan score") {
    const auto sp = tmp.file("s.txt", "u1 nan\nu2 0.1\n");
    CHECK_THROWS_WITH_AS(bind_scores(m, sp, nullptr),
                         doctest::Contains("non-finite"), ContractError);
  }
  SUBCASE("inf score") {
    const auto sp = tmp.file("s.txt", "u1 inf\nu2 0.1\n");
    CHECK_THROWS_AS(bind_scores(m, sp, nullptr), ContractError);
  }
  SUBCASE("duplicate entry for a manifest id") {
    const auto sp = tmp.file("s.txt", "u1 0.9\nu1 0.8\nu2 0.1\n");
    CHECK_THROWS_WITH_AS(bind_scores(m, sp, nullptr),
                         doctest::Contains("duplicate score"), ContractError);
  }
  SUBCASE("malformed score token") {
    const auto sp = tmp.file("s.txt", "u1 0.9x\nu2 0.1\n");
    CHECK_THROWS_WITH_AS(bind_scores(m, sp, nullptr),
                         doctest::Contains("malformed score"), ContractError);
  }
  SUBCASE("wrong field count") {
    const auto sp = tmp.file("s.txt", "u1 0.9 extra\nu2 0.1\n");
    CHECK_THROWS_AS(bind_scores(m, sp, nullptr), ContractError);
  }
}

TEST_CASE("malformed files always error, never produce invalid score sets") {
  TempDir tmp;
  const auto mp = tmp.file("m.tsv",
                           "u1\t-\tbonafide\n"
                           "u2\t-\tspoof\n");
  const Manifest m = load_manifest(mp, "demo");

  std::mt19937_64 engine(707);
  const std::vector<std::string> fragments{
      "u1",      "0.9",   "\t",  "u1 0.9", "u2 nan", "###",
      "u1\t0.9", "x y z", "u2 ", " 0.1",   "u2 1e},", "u1 -inf",
  };
  std::uniform_int_distribution<std::size_t> pick(0, fragments.size() - 1);
  std::uniform_int_distribution<int> lines(1, 6);

  for (int iter = 0; iter < 100; ++iter) {
    std::string content;
    const int n = lines(engine);
    for (int i = 0; i < n; ++i) content += fragments[pick(engine)] + "\n";
    const auto sp = tmp.file("fuzz.txt", content);
    try {
      const auto scores = bind_scores(m, sp, nullptr);
      // if binding succeeded the result must satisfy every invariant
      CHECK(scores.size() == 2);
      for (const auto& e : scores.entries()) {
        CHECK(std::isfinite(e.score));
        CHECK(m.contains(e.id));
      }
    } catch (const ContractError&) {
      // expected for malformed input
    }
  }
}
