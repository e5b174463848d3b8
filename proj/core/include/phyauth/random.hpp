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

#include <complex>
#include <cstdint>
#include <random>
#include <span>

namespace phyauth {

/// Seeded pseudo-random source. Every stochastic operation takes one of these
/// explicitly; there is no global generator.
///
/// `RandomSource::stream(seed, index)` derives statistically independent
/// streams from a master seed, so trial `i` of an experiment draws the same
/// numbers no matter which worker runs it.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed);

  static RandomSource stream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next_u64();
  double uniform();  // [0, 1)
  double uniform(double lo, double hi);
  double normal();   // N(0, 1)

  /// Circular-symmetric complex Gaussian CN(0, variance): real and imaginary
  /// parts are independent N(0, variance / 2).
  std::complex<double> complex_normal(double variance = 1.0);

  void fill(std::span<std::uint8_t> out);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// SplitMix64 finalizer; used to decorrelate derived seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace phyauth
