// Copyright 2026 The Scission Authors.
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace scission {

// Base for every error raised by the planner. Input documents that fail
// validation raise DataError; malformed query text raises QueryError.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

class QueryError : public Error {
 public:
  QueryError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)),
        position_(position) {}
  explicit QueryError(const std::string& message)
      : Error(message), position_(npos) {}

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  // Byte offset into the query text, or npos when the error is semantic.
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace scission
