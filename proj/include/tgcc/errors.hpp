/*
 * Copyright 2026 The TGCC Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
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

namespace tgcc {

/// Base class for all library errors. `kind()` maps 1:1 onto the C API
/// status codes.
class Error : public std::runtime_error {
 public:
  enum class Kind {
    argument,    // bad value passed by the caller
    structural,  // shape / symmetry / consistency violation
    capacity,    // input exceeds a hard size cap
    numeric,     // overflow, divergence, non-finite values
    state,       // operation invalid in the current state
    data,        // bundle / file level problem
  };

  Error(Kind kind, std::string msg) : std::runtime_error(std::move(msg)), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

class ArgumentError : public Error {
 public:
  explicit ArgumentError(std::string msg) : Error(Kind::argument, std::move(msg)) {}
};

class StructuralError : public Error {
 public:
  explicit StructuralError(std::string msg) : Error(Kind::structural, std::move(msg)) {}
};

class CapacityError : public Error {
 public:
  explicit CapacityError(std::string msg) : Error(Kind::capacity, std::move(msg)) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(std::string msg) : Error(Kind::numeric, std::move(msg)) {}
};

class StateError : public Error {
 public:
  explicit StateError(std::string msg) : Error(Kind::state, std::move(msg)) {}
};

/// File-level failures carry a code so callers can distinguish a missing
/// file from a corrupted one without parsing the message.
class DataError : public Error {
 public:
  enum class Code { missing_file, header_mismatch, index_range, parse };

  DataError(Code code, std::string msg) : Error(Kind::data, std::move(msg)), code_(code) {}
  Code code() const noexcept { return code_; }

 private:
  Code code_;
};

}  // namespace tgcc
