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

#include "abcr/analysis.hpp"
#include "abcr/errors.hpp"
#include "abcr/experiments.hpp"
#include "abcr/model.hpp"
#include "abcr/parallel.hpp"
#include "abcr/random.hpp"
#include "abcr/sampler.hpp"
#include "abcr/toy_gaussian.hpp"
#include "abcr/whitening.hpp"
