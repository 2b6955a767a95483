// Copyright 2026 The QRP Authors
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

namespace qrp {

/// Base class for every error raised by the library. `kind()` is a short
/// machine-readable tag used by the CLI's error line.
class Error : public std::runtime_error {
  public:
    Error(std::string kind, const std::string &what) : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string &kind() const noexcept { return kind_; }

  private:
    std::string kind_;
};

class ParseError : public Error {
  public:
    explicit ParseError(const std::string &what) : Error("parse", what) {}
};

class DuplicateSiteError : public Error {
  public:
    explicit DuplicateSiteError(const std::string &what) : Error("duplicate_site", what) {}
};

class RangeError : public Error {
  public:
    explicit RangeError(const std::string &what) : Error("range", what) {}
};

class DimensionError : public Error {
  public:
    explicit DimensionError(const std::string &what) : Error("dimension", what) {}
};

class NumericalError : public Error {
  public:
    explicit NumericalError(const std::string &what) : Error("numerical", what) {}
};

class ValidationError : public Error {
  public:
    explicit ValidationError(const std::string &what) : Error("validation", what) {}
};

class ConfigError : public Error {
  public:
    explicit ConfigError(const std::string &what) : Error("config", what) {}
};

} // namespace qrp
