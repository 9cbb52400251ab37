// Copyright 2026 The lobsim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LOBSIM_ERRORS_HPP_
#define LOBSIM_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lobsim {

// Base class for every error raised by the engine. `kind()` is a stable
// machine-readable tag used by the CLI's error output.
class Error : public std::runtime_error {
 public:
  Error(const char* kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  const char* kind() const noexcept { return kind_; }

 private:
  const char* kind_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error("invalid_argument", what) {}
};

class ParseError : public Error {
 public:
  ParseError(std::size_t row, const std::string& what)
      : Error("parse_error", "row " + std::to_string(row) + ": " + what),
        row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class DataIntegrityError : public Error {
 public:
  explicit DataIntegrityError(const std::string& what)
      : Error("data_integrity", what) {}
};

class OutOfRange : public Error {
 public:
  explicit OutOfRange(const std::string& what) : Error("out_of_range", what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error("io_error", what) {}
};

class InvalidState : public Error {
 public:
  explicit InvalidState(const std::string& what)
      : Error("invalid_state", what) {}
};

class EmptyTrades : public Error {
 public:
  explicit EmptyTrades(const std::string& what)
      : Error("empty_trades", what) {}
};

}  // namespace lobsim

#endif  // LOBSIM_ERRORS_HPP_
