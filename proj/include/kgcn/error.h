/* Copyright 2026 The KGCN Recommender Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef KGCN_ERROR_H_
#define KGCN_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kgcn {

// Root of every exception thrown by the library. The CLI maps the concrete
// subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad flag values or inconsistent dimensions, detected before any work runs.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Unreadable or unwritable files.
class IoError : public Error {
 public:
  using Error::Error;
};

// Input data that violates a contract (duplicate mappings, empty datasets).
class DataError : public Error {
 public:
  using Error::Error;
};

// Malformed line in a text input file.
class ParseError : public DataError {
 public:
  ParseError(const std::string& path, std::size_t line, const std::string& what)
      : DataError(path + ":" + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// NaN/Inf in a forward pass, a gradient or the loss.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace kgcn

#endif  // KGCN_ERROR_H_
