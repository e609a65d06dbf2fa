// Copyright 2026 The d2dassign Authors
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

namespace d2d {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A series or quadrature did not reach its tolerance. Carries the last
// estimate so callers can decide whether it is usable.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, double partial_estimate)
      : Error(what), partial_estimate_(partial_estimate) {}
  double partial_estimate() const noexcept { return partial_estimate_; }

 private:
  double partial_estimate_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// No channel assignment serves every cellular link with its QoS floor.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Instance too large for an exponential-time routine.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Valid inputs, but a combination this library does not evaluate.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

}  // namespace d2d
