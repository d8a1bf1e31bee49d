// Copyright 2026 The eetsim Authors
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

namespace eetsim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: wrong dimensions, unknown labels, violated parameter invariants.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Coupling-to-detuning ratio beyond the hard dispersive limit.
class DispersiveError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Integration produced an unphysical state (trace drift, negative population).
class PhysicalityError : public Error {
 public:
  PhysicalityError(const std::string& what, double time)
      : Error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

/// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Sweep checkpoint does not match the requested grid or is malformed.
class CheckpointError : public Error {
 public:
  using Error::Error;
};

}  // namespace eetsim
