// Copyright 2026 The abc-rates Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <vector>

#include "abcr/parallel.hpp"
#include "abcr/random.hpp"

TEST_CASE("derive_replicate_seed is deterministic") {
  REQUIRE(abcr::derive_replicate_seed(123456789ull, 7) ==
          abcr::derive_replicate_seed(123456789ull, 7));
  REQUIRE(abcr::derive_replicate_seed(0, 0) == abcr::derive_replicate_seed(0, 0));
}

TEST_CASE("derive_replicate_seed separates indices") {
  abcr::Rng rng(99);
  for (int trial = 0; trial < 10'000; ++trial) {
    const std::uint64_t base = rng.next_u64();
    REQUIRE(abcr::derive_replicate_seed(base, 0) !=
            abcr::derive_replicate_seed(base, 1));
  }
}

TEST_CASE("derived streams do not collide over many indices") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 100'000; ++i) {
    seen.insert(abcr::derive_replicate_seed(42, i));
  }
  REQUIRE(seen.size() == 100'000);
}

TEST_CASE("rng sequence is a pure function of the seed") {
  abcr::Rng a(2024), b(2024);
  for (int i = 0; i < 1000; ++i) {
    REQUIRE(a.next_u64() == b.next_u64());
  }
  for (int i = 0; i < 1000; ++i) {
    REQUIRE(a.normal() == b.normal());
  }
}

TEST_CASE("uniform01 stays in [0, 1)") {
  abcr::Rng rng(5);
  for (int i = 0; i < 100'000; ++i) {
    const double u = rng.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("normal draws have the right first two moments") {
  abcr::Rng rng(17);
  const int n = 1'000'000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sum2 += z * z;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  REQUIRE(std::abs(mean) < 5.0 / std::sqrt(static_cast<double>(n)));
  REQUIRE(std::abs(var - 1.0) < 5.0 * std::sqrt(2.0 / n));
}

TEST_CASE("run_replicates is independent of the worker count") {
  const auto job = [](std::size_t i) {
    abcr::Rng rng(abcr::derive_replicate_seed(7, i));
    double acc = 0.0;
    for (int draws = 0; draws < 100; ++draws) acc += rng.normal();
    return acc;
  };
  const auto serial = abcr::run_replicates(64, 1, job);
  const auto parallel = abcr::run_replicates(64, 8, job);
  REQUIRE(serial == parallel);
}

TEST_CASE("run_replicates rethrows worker exceptions") {
  REQUIRE_THROWS_AS(
      abcr::run_replicates(16, 4,
                           [](std::size_t i) -> int {
                             if (i == 9) throw std::runtime_error("boom");
                             return static_cast<int>(i);
                           }),
      std::runtime_error);
}
