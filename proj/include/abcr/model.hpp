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

#pragma once

#include <functional>
#include <span>

#include "abcr/random.hpp"

namespace abcr {

/// A user-pluggable generative model.
///
/// The three procedures write their results into caller-provided buffers of
/// exactly p, d and q doubles, so the sampler's inner loop allocates nothing.
/// `summary` must be deterministic; `prior_sample` and `simulate` must draw
/// all their randomness from the supplied generator.
struct ModelSpec {
  int p = 0;  ///< parameter dimension
  int d = 0;  ///< data dimension
  int q = 0;  ///< summary dimension

  std::function<void(Rng&, std::span<double>)> prior_sample;
  std::function<void(std::span<const double>, Rng&, std::span<double>)> simulate;
  std::function<void(std::span<const double>, std::span<double>)> summary;
};

/// Test function h mapping a parameter vector to a real value.
using TestFunction = std::function<double(std::span<const double>)>;

inline TestFunction constant_one() {
  return [](std::span<const double>) { return 1.0; };
}

}  // namespace abcr
