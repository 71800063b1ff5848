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

#include <stdexcept>
#include <string>
#include <utility>

namespace abcr {

// Base class for all library errors.  Every error carries a short
// machine-readable code (stable across releases) next to the human-readable
// message, so front ends can emit `error: <code>: <detail>` lines.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

struct NonSymmetricError : Error {
  explicit NonSymmetricError(const std::string& m) : Error("non_symmetric", m) {}
};

struct NotPositiveDefiniteError : Error {
  explicit NotPositiveDefiniteError(const std::string& m)
      : Error("not_positive_definite", m) {}
};

struct DimensionMismatchError : Error {
  explicit DimensionMismatchError(const std::string& m)
      : Error("dimension_mismatch", m) {}
};

struct InvalidArgumentError : Error {
  explicit InvalidArgumentError(const std::string& m)
      : Error("invalid_argument", m) {}
};

// Fixed-acceptance sampling exceeded its proposal cap; the tolerance is too
// small or the summary density vanishes near the observation.
struct ProposalCapExceededError : Error {
  explicit ProposalCapExceededError(const std::string& m)
      : Error("proposal_cap_exceeded", m) {}
};

struct QuadratureNotConvergedError : Error {
  explicit QuadratureNotConvergedError(const std::string& m)
      : Error("quadrature_not_converged", m) {}
};

struct DegenerateCurvatureError : Error {
  explicit DegenerateCurvatureError(const std::string& m)
      : Error("degenerate_curvature", m) {}
};

struct SingularDesignError : Error {
  explicit SingularDesignError(const std::string& m)
      : Error("singular_design", m) {}
};

struct InvalidCoefficientsError : Error {
  explicit InvalidCoefficientsError(const std::string& m)
      : Error("invalid_coefficients", m) {}
};

struct NonPositiveInputError : Error {
  explicit NonPositiveInputError(const std::string& m)
      : Error("non_positive_input", m) {}
};

struct ScheduleUnderflowError : Error {
  explicit ScheduleUnderflowError(const std::string& m)
      : Error("schedule_underflow", m) {}
};

struct PilotFailedError : Error {
  explicit PilotFailedError(const std::string& m) : Error("pilot_failed", m) {}
};

struct InsufficientLevelsError : Error {
  explicit InsufficientLevelsError(const std::string& m)
      : Error("insufficient_levels", m) {}
};

}  // namespace abcr
