/* Copyright 2026 The dmrsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */

#pragma once

#include <stdexcept>
#include <string>

namespace dmrsim {

/// Base of every error raised by the library. Input errors (bad files, bad
/// arguments, contract violations by the caller) derive from InputError;
/// broken internal invariants raise InvariantViolation.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

// profiles
class InsufficientData : public InputError {
 public:
  using InputError::InputError;
};
class UnknownConfiguration : public InputError {
 public:
  using InputError::InputError;
};
class InvalidProfile : public InputError {
 public:
  using InputError::InputError;
};

// redistribution
class OutOfBounds : public InputError {
 public:
  using InputError::InputError;
};
class IncompatibleGroups : public InputError {
 public:
  using InputError::InputError;
};
class IndivisibleData : public InputError {
 public:
  using InputError::InputError;
};
class ShapeError : public InputError {
 public:
  using InputError::InputError;
};

// reconfig
class PolicyViolation : public InputError {
 public:
  using InputError::InputError;
};
class Busy : public InputError {
 public:
  using InputError::InputError;
};

// workload / simulator / metrics
class InvalidSpec : public InputError {
 public:
  using InputError::InputError;
};
class Unschedulable : public InputError {
 public:
  using InputError::InputError;
};
class IncomparableRuns : public InputError {
 public:
  using InputError::InputError;
};

/// Malformed text input. The message names the offending field or line.
class ParseError : public InputError {
 public:
  using InputError::InputError;
};

class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace dmrsim
