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

#include <cmath>
#include <random>
#include <vector>

#include "gapdecomp/decomposition.hpp"
#include "gapdecomp/errors.hpp"
#include "reference_gaps.hpp"

using gapdecomp::aggregate_trials;
using gapdecomp::ContractError;
using gapdecomp::decompose;
using gapdecomp::GapDecomposition;

TEST_CASE("decompose reproduces the direct-arithmetic example") {
  const auto g = decompose(0.05, 0.035, 0.255);
  CHECK(g.performance_gap == doctest::Approx(0.205).epsilon(1e-12));
  CHECK(g.hardness_gap == doctest::Approx(-0.015).epsilon(1e-12));
  CHECK(g.difference_gap == doctest::Approx(0.220).epsilon(1e-12));
}

TEST_CASE("identical domains decompose to zero gaps") {
  for (double e : {0.0, 0.1, 0.5, 1.0}) {
    const auto g = decompose(e, e, e);
    CHECK(g.performance_gap == 0.0);
    CHECK(g.hardness_gap == 0.0);
    CHECK(g.difference_gap == 0.0);
  }
}

TEST_CASE("decompose rejects out-of-range inputs") {
  CHECK_THROWS_AS(decompose(-0.01, 0.5, 0.5), ContractError);
  CHECK_THROWS_AS(decompose(0.5, 1.01, 0.5), ContractError);
  CHECK_THROWS_AS(decompose(0.5, 0.5, std::nan("")), ContractError);
}

TEST_CASE("identity holds to 1e-12 on random triples") {
  std::mt19937_64 engine(808);
  std::uniform_real_distribution<double> value(0.0, 1.0);
  for (int iter = 0; iter < 10000; ++iter) {
    const auto g = decompose(value(engine), value(engine), value(engine));
    CHECK(std::abs(g.performance_gap -
                   (g.hardness_gap + g.difference_gap)) <= 1e-12);
  }
}

TEST_CASE("hardness is antisymmetric under domain exchange") {
  std::mt19937_64 engine(909);
  std::uniform_real_distribution<double> value(0.0, 1.0);
  for (int iter = 0; iter < 500; ++iter) {
    const double eer_d = value(engine);
    const double eer_dp = value(engine);
    const double cross = value(engine);
    const auto forward = decompose(eer_d, eer_dp, cross);
    const auto backward = decompose(eer_dp, eer_d, cross);
    CHECK(forward.hardness_gap == doctest::Approx(-backward.hardness_gap)
                                      .epsilon(1e-15));
  }
}

TEST_CASE("published reference rows close to within 0.15 points") {
  for (const auto& row : reference_gaps::kRows) {
    const double residual =
        row.hardness + row.difference - row.performance;
    INFO(row.condition, " ", row.model);
    CHECK(std::abs(residual) <= 0.15);
  }
  // two spot checks frozen from the source tables
  CHECK(std::abs(13.4 + 4.2 - 17.7) <= 0.15);
  CHECK(-1.5 + 79.7 == doctest::Approx(78.2).epsilon(1e-12));
}

TEST_CASE("aggregate of a single trial is degenerate") {
  const auto g = decompose(0.1, 0.2, 0.4);
  const auto agg = aggregate_trials({g});
  CHECK(agg.performance_gap.mean ==
        doctest::Approx(g.performance_gap).epsilon(1e-15));
  CHECK(agg.performance_gap.std_dev == 0.0);
  CHECK(agg.performance_gap.n_trials == 1);
  CHECK(agg.performance_gap.degenerate);
}

TEST_CASE("two-trial aggregate matches the hand-computed sample std") {
  // performance gaps 0.10 and 0.20
  const auto g1 = decompose(0.10, 0.15, 0.20);
  const auto g2 = decompose(0.10, 0.15, 0.30);
  const auto agg = aggregate_trials({g1, g2});
  CHECK(agg.performance_gap.mean == doctest::Approx(0.15).epsilon(1e-12));
  CHECK(agg.performance_gap.std_dev ==
        doctest::Approx(std::sqrt(0.005)).epsilon(1e-12));
  CHECK_FALSE(agg.performance_gap.degenerate);
}

TEST_CASE("aggregation preserves the identity through the mean") {
  std::mt19937_64 engine(1010);
  std::uniform_real_distribution<double> value(0.0, 1.0);
  for (int iter = 0; iter < 100; ++iter) {
    std::vector<GapDecomposition> trials;
    const int n = 2 + static_cast<int>(engine() % 9);
    for (int i = 0; i < n; ++i) {
      trials.push_back(decompose(value(engine), value(engine), value(engine)));
    }
    const auto agg = aggregate_trials(trials);
    CHECK(std::abs(agg.performance_gap.mean -
                   (agg.hardness_gap.mean + agg.difference_gap.mean)) <=
          1e-12);
  }
}

TEST_CASE("aggregate_trials rejects an empty list") {
  CHECK_THROWS_AS(aggregate_trials({}), ContractError);
}

TEST_CASE("scatter rows carry the diagonal reference") {
  using gapdecomp::scatter_table;
  using gapdecomp::ScatterCell;

  SUBCASE("ideal generalization sits on the diagonal") {
    const auto rows = scatter_table({ScatterCell{"m", 0.02, 0.02}});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].eer_in_out == rows[0].diagonal);
  }
  SUBCASE("vertical distance to the diagonal is the performance gap") {
    const auto rows = scatter_table({ScatterCell{"m", 0.02, 0.20}});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].eer_in_out - rows[0].diagonal ==
          doctest::Approx(0.18).epsilon(1e-12));
    const auto gaps = decompose(0.02, 0.10, 0.20);
    CHECK(rows[0].eer_in_out - rows[0].diagonal ==
          doctest::Approx(gaps.performance_gap).epsilon(1e-12));
  }
  SUBCASE("range violations are rejected") {
    CHECK_THROWS_AS(scatter_table({ScatterCell{"m", -0.1, 0.2}}),
                    ContractError);
    CHECK_THROWS_AS(scatter_table({ScatterCell{"m", 0.1, 1.2}}),
                    ContractError);
  }
}
