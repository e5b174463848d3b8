// SPDX-License-Identifier: Apache-2.0
//
// phyauth: physical-layer assisted authentication for vehicular networks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace phyauth {

// Argument outside the mathematical domain of an operation (e.g. an AoA
// beyond the visible range of a linear array).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Coincident endpoints where a bearing or a line is required.
class DegenerateGeometry : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Too few pilots to invert the pilot auto-covariance.
class RankDeficient : public std::runtime_error {
 public:
  RankDeficient(std::size_t pilots, std::size_t elements)
      : std::runtime_error("pilot covariance is rank deficient: L=" + std::to_string(pilots) +
                           " n=" + std::to_string(elements)),
        pilots_(pilots),
        elements_(elements) {}

  std::size_t pilots() const noexcept { return pilots_; }
  std::size_t elements() const noexcept { return elements_; }

 private:
  std::size_t pilots_;
  std::size_t elements_;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MalformedBeacon : public ParseError {
 public:
  using ParseError::ParseError;
};

class ProtocolViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace phyauth
