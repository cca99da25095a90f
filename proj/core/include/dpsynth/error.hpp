// Copyright 2026 The dpsynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPSYNTH_ERROR_HPP_
#define DPSYNTH_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace dpsynth {

// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller violated a documented precondition or passed an out-of-domain value.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// File or OS level failure.
class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed input shape: ragged CSV rows, missing headers, schema violations.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// Invalid run or attack configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A privacy charge was requested that the ledger cannot cover. The operation
// that raised it has no side effects.
class BudgetExhaustedError : public Error {
 public:
  using Error::Error;
};

// Graphical-model inference exceeded the dense-table resource cap.
class ModelError : public Error {
 public:
  using Error::Error;
};

}  // namespace dpsynth

#endif  // DPSYNTH_ERROR_HPP_
