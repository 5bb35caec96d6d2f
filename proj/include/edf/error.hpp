// Copyright 2026 The edfola Authors
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

namespace edf {

/// Base class of every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: schemas, query specs, metadata, violated preconditions.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Failure while a query is executing (worker failure, closed channel, I/O).
class ExecutionError : public Error {
 public:
  using Error::Error;
};

/// A partial shares primary-key values with the latest version.
class KeyOverlapError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// latest_state() on a state without any version.
class EmptyStateError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an estimator.
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// CSV or metadata parse failure; the message carries file/line.
class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

}  // namespace edf
