/*
 * Copyright 2026 The cranhl Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace cranhl {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad data fed to an operation (empty buffer, unnormalized target, ...).
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// Tensor/matrix dimensions do not satisfy an operation's contract.
class InvalidShapeError : public Error {
 public:
  using Error::Error;
};

// A configuration value is out of its legal range.
class InvalidConfigError : public Error {
 public:
  using Error::Error;
};

// Filesystem / serialization failure.
class IoError : public Error {
 public:
  using Error::Error;
};

// A file parsed but its contents are damaged or truncated.
class CorruptFileError : public IoError {
 public:
  using IoError::IoError;
};

// A file's version or config fingerprint does not match what the reader
// expects.
class VersionError : public IoError {
 public:
  using IoError::IoError;
};

// An internal invariant was violated (non-finite value, missing gradient).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// Training produced a non-finite loss.
class TrainingDivergedError : public Error {
 public:
  using Error::Error;
};

}  // namespace cranhl
