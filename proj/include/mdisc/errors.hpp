// Copyright 2026 The mdisc Authors
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
#include <vector>

namespace mdisc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation
/// (fidelity >= 1, margin outside [0, 1], ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A value violates a structural invariant (non-normalized state, non-PSD
/// operator, incomplete POVM, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// The closed form requested does not apply in this parameter regime.
class RegimeError : public Error {
 public:
  using Error::Error;
};

/// A POVM cannot be identified with an optimal unambiguous-discrimination
/// measurement (an element of rank two, or E1 + E2 not saturating).
class NotRepresentableError : public Error {
 public:
  using Error::Error;
};

/// Numerical search exhausted its budget without a certified result. Carries
/// the named violation magnitudes of the best candidate seen.
class SearchFailure : public Error {
 public:
  using Magnitudes = std::vector<std::pair<std::string, double>>;

  SearchFailure(const std::string& what, double best_residual,
                Magnitudes magnitudes = {})
      : Error(what),
        best_residual_(best_residual),
        magnitudes_(std::move(magnitudes)) {}

  double best_residual() const { return best_residual_; }
  const Magnitudes& magnitudes() const { return magnitudes_; }

 private:
  double best_residual_;
  Magnitudes magnitudes_;
};

}  // namespace mdisc
