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

#include "phyauth/stats.hpp"

#include <algorithm>
#include <cmath>

namespace phyauth::stats {

double normal_cdf(double z) noexcept { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_q(double z) noexcept { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

double normal_interval(double lo, double hi) noexcept {
  if (!(hi > lo)) return 0.0;
  // Difference of the smaller tails keeps precision far from the mean.
  if (lo >= 0.0) return normal_q(lo) - normal_q(hi);
  if (hi <= 0.0) return normal_cdf(hi) - normal_cdf(lo);
  return 1.0 - normal_cdf(lo) - normal_q(hi);
}

double truncated_normal_interval(double lo, double hi, double mean, double sd, double support_lo,
                                 double support_hi) noexcept {
  const double a = std::max(lo, support_lo);
  const double b = std::min(hi, support_hi);
  if (!(b > a)) return 0.0;
  const double mass = normal_interval((support_lo - mean) / sd, (support_hi - mean) / sd);
  if (!(mass > 0.0)) return 0.0;
  const double p = normal_interval((a - mean) / sd, (b - mean) / sd) / mass;
  return std::clamp(p, 0.0, 1.0);
}

double binomial_std_error(double p, long long trials) noexcept {
  if (trials <= 0) return 0.0;
  const double q = std::clamp(p, 0.0, 1.0);
  return std::sqrt(q * (1.0 - q) / static_cast<double>(trials));
}

double kolmogorov_p_value(double statistic, std::size_t n) noexcept {
  if (n == 0) return 1.0;
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  const double lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * statistic;
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 200; ++j) {
    const double term = sign * std::exp(-2.0 * j * j * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace phyauth::stats
