// Copyright 2026 The ntpsd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace ntpsd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A Fock-space truncation drops more probability mass than allowed.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// Invalid arguments or inconsistent domain objects.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Block propagation lost unitarity beyond tolerance.
class EvolutionError : public Error {
 public:
  using Error::Error;
};

/// A homodyne projection produced a non-normalizable state.
class ConditioningError : public Error {
 public:
  using Error::Error;
};

/// An outcome grid or phase-space grid does not capture enough mass.
class GridError : public Error {
 public:
  using Error::Error;
};

/// An optimizer located its maximum on the edge of the search bracket.
class BoundaryError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent scenario configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace ntpsd
