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

#include <benchmark/benchmark.h>

#include "phyauth/channel.hpp"
#include "phyauth/estimation.hpp"

namespace {

using namespace phyauth;

channel::RicianParams params_for(int n) {
  channel::RicianParams p;
  p.k = 100.0;
  p.theta = deg2rad(25.0);
  p.rx = geometry::ArrayConfig{n, 0.5};
  p.tx = p.rx;
  return p;
}

void BM_Transmit(benchmark::State& state) {
  const auto p = params_for(static_cast<int>(state.range(0)));
  RandomSource rng(1);
  const auto frame = channel::default_pilots(p.tx, 1, 10, 1.0, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(channel::transmit(frame, p, 0.01, rng, channel::Fading::PerPilot));
  }
}
BENCHMARK(BM_Transmit)->Arg(4)->Arg(16);

void BM_MlAoa(benchmark::State& state) {
  const auto p = params_for(static_cast<int>(state.range(0)));
  RandomSource rng(2);
  const auto frame = channel::default_pilots(p.tx, 1, 10, 1.0, rng);
  const auto obs = channel::transmit(frame, p, 0.01, rng, channel::Fading::PerPilot);
  const estimation::AoaEstimator est({p.rx, p.k, 0.01, {}, estimation::MlCriterion::PilotWeighted});
  for (auto _ : state) {
    benchmark::DoNotOptimize(est.estimate(obs));
  }
}
BENCHMARK(BM_MlAoa)->Arg(4)->Arg(16);

void BM_Crb(benchmark::State& state) {
  const auto p = params_for(4);
  const ComplexMat r_z = ComplexMat::Identity(4, 4) * 0.03;
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimation::crb(p.theta, p, 1.0, 40, r_z));
  }
}
BENCHMARK(BM_Crb);

}  // namespace
BENCHMARK_MAIN();
