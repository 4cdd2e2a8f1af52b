// Copyright 2026 The estalg Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace estalg {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input, violated precondition or incompatible dimensions.
class InputError : public Error {
 public:
  using Error::Error;
};

/// The unnormalized filter norm sigma_t(I) vanished.
class FilterDegeneracy : public Error {
 public:
  FilterDegeneracy(std::size_t step, double norm)
      : Error("filter degeneracy at step " + std::to_string(step) +
              ": sigma_t(I) = " + std::to_string(norm)),
        step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// Non-finite values appeared while integrating a trajectory.
class NumericalBlowUp : public Error {
 public:
  explicit NumericalBlowUp(std::size_t step)
      : Error("non-finite state at step " + std::to_string(step)), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// A symbolic intermediate exceeded the total-degree guard.
class DegreeGuardError : public Error {
 public:
  DegreeGuardError(int degree, int limit)
      : Error("symbolic degree guard: intermediate of total degree " +
              std::to_string(degree) + " exceeds " + std::to_string(limit)),
        degree_(degree) {}
  int degree() const noexcept { return degree_; }

 private:
  int degree_;
};

/// The Wei-Norman coordinate chart became singular.
class ChartBreakdown : public Error {
 public:
  ChartBreakdown(double time, double condition)
      : Error("Wei-Norman chart breakdown at t = " + std::to_string(time) +
              " (condition number " + std::to_string(condition) + ")"),
        time_(time),
        condition_(condition) {}
  double time() const noexcept { return time_; }
  double condition() const noexcept { return condition_; }

 private:
  double time_;
  double condition_;
};

}  // namespace estalg
