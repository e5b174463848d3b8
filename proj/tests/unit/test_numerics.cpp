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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "phyauth/errors.hpp"
#include "phyauth/linalg.hpp"
#include "phyauth/random.hpp"
#include "phyauth/stats.hpp"

namespace phyauth {
namespace {

TEST(RandomSource, SameSeedSameSequence) {
  RandomSource a(99);
  RandomSource b(99);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(RandomSource, StreamsAreDistinctAndReproducible) {
  RandomSource s0 = RandomSource::stream(5, 0);
  RandomSource s1 = RandomSource::stream(5, 1);
  RandomSource s0b = RandomSource::stream(5, 0);
  const auto v0 = s0.next_u64();
  EXPECT_NE(v0, s1.next_u64());
  EXPECT_EQ(v0, s0b.next_u64());
}

TEST(RandomSource, ComplexNormalMoments) {
  RandomSource rng(3);
  const int n = 200000;
  double re2 = 0.0;
  double im2 = 0.0;
  double cross = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto z = rng.complex_normal(2.0);
    re2 += z.real() * z.real();
    im2 += z.imag() * z.imag();
    cross += z.real() * z.imag();
  }
  // Circular symmetry: variance splits evenly, no real/imag correlation.
  EXPECT_NEAR(re2 / n, 1.0, 0.02);
  EXPECT_NEAR(im2 / n, 1.0, 0.02);
  EXPECT_NEAR(cross / n, 0.0, 0.02);
}

TEST(InverseSqrtHermitian, InvertsSquareOfMatrix) {
  RandomSource rng(4);
  ComplexMat a(5, 5);
  for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = rng.complex_normal();
  const ComplexMat r = a * a.adjoint() + ComplexMat::Identity(5, 5);
  const ComplexMat w = inverse_sqrt_hermitian(r);
  EXPECT_TRUE(is_hermitian(w, 1e-10));
  EXPECT_LT((w * r * w - ComplexMat::Identity(5, 5)).norm(), 1e-10);
}

TEST(InverseSqrtHermitian, RejectsNonPositive) {
  EXPECT_THROW(inverse_sqrt_hermitian(ComplexMat::Zero(3, 3)), NumericalError);
}

TEST(NormalTails, AgreeWithReferenceValues) {
  EXPECT_NEAR(stats::normal_cdf(0.0), 0.5, 1e-15);
  EXPECT_NEAR(stats::normal_q(3.0), 1.3498980316300946e-3, 1e-15);
  EXPECT_NEAR(stats::normal_interval(-3.0, 3.0), 0.9973002039367398, 1e-14);
  // Far-tail interval keeps relative accuracy.
  EXPECT_NEAR(stats::normal_interval(10.0, 11.0) / 7.619661958203076e-24, 1.0, 1e-9);
}

TEST(TruncatedNormal, MatchesQuadrature) {
  const double mean = 1.2;
  const double sd = 0.4;
  const double lo = -kPi / 2;
  const double hi = kPi / 2;
  // Composite Simpson on the untruncated density, then renormalise.
  const auto integrate = [&](double a, double b) {
    const int n = 20000;
    const double h = (b - a) / n;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double x = a + i * h;
      const double f = std::exp(-0.5 * std::pow((x - mean) / sd, 2));
      s += f * (i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0));
    }
    return s * h / 3.0;
  };
  const double mass = integrate(lo, hi);
  EXPECT_NEAR(stats::truncated_normal_interval(0.8, 1.5, mean, sd, lo, hi),
              integrate(0.8, 1.5) / mass, 1e-9);
}

TEST(BinomialStdError, Formula) {
  EXPECT_NEAR(stats::binomial_std_error(0.5, 100), 0.05, 1e-15);
  EXPECT_EQ(stats::binomial_std_error(0.0, 100), 0.0);
}

TEST(KsTest, AcceptsOwnDistributionRejectsShifted) {
  RandomSource rng(8);
  std::vector<double> same(5000);
  std::vector<double> shifted(5000);
  for (auto& x : same) x = rng.normal();
  for (auto& x : shifted) x = rng.normal() + 0.2;
  const auto cdf = [](double x) { return stats::normal_cdf(x); };
  EXPECT_GT(stats::ks_test(same, cdf).p_value, 0.01);
  EXPECT_LT(stats::ks_test(shifted, cdf).p_value, 1e-6);
}

TEST(KsTest, KolmogorovTailAgainstAsymptoticSeries) {
  // Large-n limit of the Kolmogorov distribution at sqrt(n) D = 1.3581 is 0.05.
  EXPECT_NEAR(stats::kolmogorov_p_value(1.3581 / std::sqrt(1e6), 1000000), 0.05, 1e-3);
}

}  // namespace
}  // namespace phyauth
