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

#include <cstddef>
#include <vector>

#include "phyauth/geometry.hpp"
#include "phyauth/linalg.hpp"
#include "phyauth/random.hpp"

namespace phyauth::channel {

using geometry::ArrayConfig;

/// Rician MIMO link parameters.
///
/// The LOS amplitude is mu = sqrt(k / (1 + k)) and the NLOS scale is
/// sigma = sqrt(1 / (2 (1 + k))), so mu^2 + 2 sigma^2 = 1. `k` may be +inf
/// (pure LOS); k = 0 is the Rayleigh limit.
struct RicianParams {
  double k = 100.0;
  double theta = 0.0;  // AoA of the LOS path at the receiver
  double phi = 0.0;    // AoD of the LOS path at the transmitter
  ArrayConfig rx{};
  ArrayConfig tx{};

  double mu() const noexcept;
  double sigma() const noexcept;
  void validate() const;
};

/// One draw of H = H_los + H_nlos (rx.n x tx.n).
struct ChannelRealization {
  ComplexMat h_los;
  ComplexMat h_nlos;
  ComplexMat h;
};

/// Pilot transmit vectors for one message: L = 4 n_p n_s pilot subcarriers.
struct PilotFrame {
  int n_p = 1;
  int n_s = 10;
  double power = 1.0;
  std::vector<ComplexVec> pilots;

  std::size_t size() const noexcept { return pilots.size(); }
  std::size_t pilots_per_packet() const noexcept { return 4U * static_cast<std::size_t>(n_s); }
  /// Mean of ||X[l]||^2 over the frame.
  double mean_pilot_energy() const;
};

struct PilotObservation {
  std::vector<ComplexVec> ys;
  PilotFrame frame;
  double noise_var = 0.0;
};

enum class Fading {
  Block,     // one NLOS draw per packet
  PerPilot,  // independent NLOS draw for every pilot subcarrier
};

inline constexpr int kPilotsPerSymbol = 4;

/// Number of pilot subcarriers carried by n_p packets of n_s OFDM symbols.
std::size_t pilot_count(int n_p, int n_s);

/// mu e^{j pi/4} a_r(theta) a_t(phi)^H.
ComplexMat los_component(const RicianParams& params);

ChannelRealization draw_channel(const RicianParams& params, RandomSource& rng);

/// Y[l] = H[l] X[l] + N[l], N[l] ~ CN(0, noise_var I).
///
/// Random draws are consumed in a fixed order that does not depend on the
/// pilot values, so scaling the frame under a fixed seed scales H X exactly.
PilotObservation transmit(const PilotFrame& frame, const RicianParams& params, double noise_var,
                          RandomSource& rng, Fading fading = Fading::Block);

/// Complex-Gaussian pilots, each rescaled so that ||X[l]||^2 = power.
PilotFrame default_pilots(const ArrayConfig& tx, int n_p, int n_s, double power,
                          RandomSource& rng);

/// Deterministic pilots sqrt(power) e_{l mod n}; their auto-covariance is
/// (power / n) I whenever L is a multiple of n.
PilotFrame orthogonal_pilots(const ArrayConfig& tx, int n_p, int n_s, double power);

}  // namespace phyauth::channel
