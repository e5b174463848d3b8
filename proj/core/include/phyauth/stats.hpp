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

#include <span>

namespace phyauth::stats {

/// Standard normal CDF.
double normal_cdf(double z) noexcept;

/// Standard normal tail probability Q(z) = 1 - Phi(z).
double normal_q(double z) noexcept;

/// P(lo <= Z <= hi) for Z ~ N(0, 1), accurate in both tails.
double normal_interval(double lo, double hi) noexcept;

/// P(lo <= T <= hi) for T a normal(mean, sd) truncated to [support_lo, support_hi].
double truncated_normal_interval(double lo, double hi, double mean, double sd, double support_lo,
                                 double support_hi) noexcept;

/// Binomial standard error sqrt(p (1 - p) / trials).
double binomial_std_error(double p, long long trials) noexcept;

struct KsResult {
  double statistic = 0.0;  // sup |F_n - F|
  double p_value = 1.0;
};

/// One-sample Kolmogorov-Smirnov test. `samples` is sorted in place; `cdf`
/// is the hypothesised distribution function.
template <typename Cdf>
KsResult ks_test(std::span<double> samples, Cdf&& cdf);

/// Asymptotic Kolmogorov distribution tail P(K > sqrt(n) D), with the
/// Stephens small-sample correction.
double kolmogorov_p_value(double statistic, std::size_t n) noexcept;

}  // namespace phyauth::stats

#include <algorithm>

namespace phyauth::stats {

template <typename Cdf>
KsResult ks_test(std::span<double> samples, Cdf&& cdf) {
  KsResult out;
  if (samples.empty()) return out;
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::max(f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f));
  }
  out.statistic = d;
  out.p_value = kolmogorov_p_value(d, samples.size());
  return out;
}

}  // namespace phyauth::stats
