// Copyright 2026 The aqec Authors
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

namespace aqec {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Empty dimension list or a subsystem with fewer than two levels.
class InvalidSpace : public Error {
 public:
  using Error::Error;
};

/// Operands live on different composite spaces or have mismatched shapes.
class SpaceMismatch : public Error {
 public:
  using Error::Error;
};

/// A value outside its documented domain (bad index, negative rate, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A state that violates the density-matrix or state-vector invariants.
class InvalidState : public Error {
 public:
  using Error::Error;
};

/// The dense step propagator was requested for a space above the size guard.
class PropagatorTooLarge : public Error {
 public:
  using Error::Error;
};

/// An invariant broke during time integration.
class IntegrationFailure : public Error {
 public:
  IntegrationFailure(std::string invariant, double time, const std::string& detail)
      : Error("integration failure at t=" + std::to_string(time) + ": " + invariant +
              " violated (" + detail + ")"),
        invariant_(std::move(invariant)),
        time_(time) {}

  const std::string& invariant() const noexcept { return invariant_; }
  double time() const noexcept { return time_; }

 private:
  std::string invariant_;
  double time_;
};

/// Exponential fit did not converge or the input series was unusable.
class FitError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration file or override.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace aqec
