// Copyright 2026 The QIS Solver Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qis {

/// Assignment length or index does not match the problem size.
class DimensionError : public std::invalid_argument {
 public:
    using std::invalid_argument::invalid_argument;
};

/// A numeric argument lies outside its admissible domain.
class DomainError : public std::domain_error {
 public:
    using std::domain_error::domain_error;
};

/// Problem too large for an exhaustive method.
class CapacityError : public std::length_error {
 public:
    using std::length_error::length_error;
};

/// Incremental state disagrees with a full recomputation.
class ConsistencyError : public std::logic_error {
 public:
    using std::logic_error::logic_error;
};

/// Invalid solver id, mode id, suite file, or parameter override.
class ConfigError : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

/// Instance file missing or unreadable.
class InstanceIoError : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

/// Malformed instance or reference text. `line()` is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
 public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

 private:
    std::size_t line_;
};

}  // namespace qis
