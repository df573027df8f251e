/*
 * Copyright 2026 The MAPDA-MIR Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
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

namespace mapda {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input errors. The CLI maps these to exit code 2.
class ParseError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class RaggedGrid : public Error {
 public:
  using Error::Error;
};

class NonPositiveSlotId : public Error {
 public:
  using Error::Error;
};

// Domain errors. The CLI maps these to exit code 1.
class DomainError : public Error {
 public:
  using Error::Error;
};

class ValidationFailure : public Error {
 public:
  using Error::Error;
};

class ConstraintViolation : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Errors raised while delivering one slot carry the offending slot id.
class SlotError : public Error {
 public:
  SlotError(int slot, const std::string& what) : Error(what), slot_(slot) {}
  int slot() const noexcept { return slot_; }

 private:
  int slot_;
};

class Infeasible : public SlotError {
 public:
  using SlotError::SlotError;
};

class DegenerateChannel : public SlotError {
 public:
  using SlotError::SlotError;
};

class DecodeMismatch : public SlotError {
 public:
  using SlotError::SlotError;
};

}  // namespace mapda
