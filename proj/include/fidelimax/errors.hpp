// Copyright 2026 The fidelimax authors
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

#ifndef FIDELIMAX_ERRORS_HPP
#define FIDELIMAX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fidelimax {

/// Caller passed a value that violates a documented precondition or type
/// invariant (dimension mismatch, out-of-range parameter, bad POVM, ...).
class invalid_input_error : public std::invalid_argument {
 public:
  explicit invalid_input_error(const std::string& what)
      : std::invalid_argument(what) {}
};

/// Malformed serialized data (bad JSON, unknown schema version, ...).
class parse_error : public std::runtime_error {
 public:
  explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

/// An estimator was paired with data produced for a different plan.
class integrity_error : public std::runtime_error {
 public:
  explicit integrity_error(const std::string& what)
      : std::runtime_error(what) {}
};

/// Request exceeds a hard resource guard (e.g. group enumeration size).
class resource_limit_error : public std::runtime_error {
 public:
  explicit resource_limit_error(const std::string& what)
      : std::runtime_error(what) {}
};

/// A computation hit a genuine singularity (e.g. log of a zero probability
/// with smoothing disabled).
class singularity_error : public std::runtime_error {
 public:
  explicit singularity_error(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace fidelimax

#endif  // FIDELIMAX_ERRORS_HPP
