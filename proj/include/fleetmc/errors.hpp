// Copyright 2026 The fleetmc Authors. All Rights Reserved.
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

#ifndef FLEETMC_ERRORS_HPP_
#define FLEETMC_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace fleetmc {

// Bad input: malformed files, inconsistent shapes, out-of-domain arguments.
// The CLI maps it to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

class IndexError : public ValidationError {
 public:
  explicit IndexError(const std::string& what) : ValidationError(what) {}
};

// A solve or estimate that could not produce a finite answer. Exit code 2.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fleetmc

#endif  // FLEETMC_ERRORS_HPP_
