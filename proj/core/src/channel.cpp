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

#include "phyauth/channel.hpp"

#include <cmath>
#include <limits>

#include "phyauth/errors.hpp"

namespace phyauth::channel {

double RicianParams::mu() const noexcept {
  if (std::isinf(k)) return 1.0;
  return std::sqrt(k / (1.0 + k));
}

double RicianParams::sigma() const noexcept {
  if (std::isinf(k)) return 0.0;
  return std::sqrt(1.0 / (2.0 * (1.0 + k)));
}

void RicianParams::validate() const {
  if (!(k >= 0.0)) {
    throw DomainError("Ricean factor must be non-negative");
  }
  rx.validate();
  tx.validate();
}

double PilotFrame::mean_pilot_energy() const {
  if (pilots.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& x : pilots) sum += x.squaredNorm();
  return sum / static_cast<double>(pilots.size());
}

std::size_t pilot_count(int n_p, int n_s) {
  if (n_p < 1 || n_s < 1) {
    throw ConfigError("frame needs at least one packet and one symbol");
  }
  return static_cast<std::size_t>(kPilotsPerSymbol) * static_cast<std::size_t>(n_p) *
         static_cast<std::size_t>(n_s);
}

ComplexMat los_component(const RicianParams& params) {
  const ComplexVec a_r = geometry::steering_vector(params.theta, params.rx);
  const ComplexVec a_t = geometry::steering_vector(params.phi, params.tx);
  const Complex phase(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0));
  return (params.mu() * phase) * a_r * a_t.adjoint();
}

namespace {

ComplexMat draw_nlos(const RicianParams& params, RandomSource& rng) {
  const double entry_var = 2.0 * params.sigma() * params.sigma();
  ComplexMat h(params.rx.n, params.tx.n);
  // Column-major fill order is part of the reproducibility contract.
  for (Eigen::Index c = 0; c < h.cols(); ++c) {
    for (Eigen::Index r = 0; r < h.rows(); ++r) {
      h(r, c) = rng.complex_normal(entry_var);
    }
  }
  return h;
}

}  // namespace

ChannelRealization draw_channel(const RicianParams& params, RandomSource& rng) {
  params.validate();
  ChannelRealization out;
  out.h_los = los_component(params);
  out.h_nlos = draw_nlos(params, rng);
  out.h = out.h_los + out.h_nlos;
  return out;
}

PilotObservation transmit(const PilotFrame& frame, const RicianParams& params, double noise_var,
                          RandomSource& rng, Fading fading) {
  params.validate();
  if (!(noise_var >= 0.0)) {
    throw DomainError("noise variance must be non-negative");
  }
  if (frame.pilots.empty()) {
    throw ConfigError("pilot frame is empty");
  }
  const ComplexMat h_los = los_component(params);
  const std::size_t per_packet = frame.pilots_per_packet();

  PilotObservation obs;
  obs.frame = frame;
  obs.noise_var = noise_var;
  obs.ys.reserve(frame.size());

  const double two_sigma2 = 2.0 * params.sigma() * params.sigma();
  ComplexMat h_nlos;
  for (std::size_t l = 0; l < frame.size(); ++l) {
    const ComplexVec& x = frame.pilots[l];
    if (x.size() != params.tx.n) {
      throw ConfigError("pilot length does not match the transmit array");
    }
    ComplexVec y = h_los * x;
    if (fading == Fading::PerPilot) {
      // A fresh i.i.d. H_NLOS times x is CN(0, 2 sigma^2 |x|^2 I), so the
      // scattered term and the noise collapse into one draw per element.
      const double var = two_sigma2 * x.squaredNorm() + noise_var;
      for (Eigen::Index m = 0; m < y.size(); ++m) {
        y(m) += rng.complex_normal(var);
      }
    } else {
      if (per_packet == 0 || l % per_packet == 0) h_nlos = draw_nlos(params, rng);
      y += h_nlos * x;
      for (Eigen::Index m = 0; m < y.size(); ++m) {
        y(m) += rng.complex_normal(noise_var);
      }
    }
    obs.ys.push_back(std::move(y));
  }
  return obs;
}

PilotFrame default_pilots(const ArrayConfig& tx, int n_p, int n_s, double power,
                          RandomSource& rng) {
  tx.validate();
  if (!(power > 0.0)) {
    throw ConfigError("pilot power must be positive");
  }
  const std::size_t count = pilot_count(n_p, n_s);
  PilotFrame frame{n_p, n_s, power, {}};
  frame.pilots.reserve(count);
  for (std::size_t l = 0; l < count; ++l) {
    ComplexVec x(tx.n);
    for (int m = 0; m < tx.n; ++m) x(m) = rng.complex_normal(1.0);
    x *= std::sqrt(power) / x.norm();
    frame.pilots.push_back(std::move(x));
  }
  return frame;
}

PilotFrame orthogonal_pilots(const ArrayConfig& tx, int n_p, int n_s, double power) {
  tx.validate();
  if (!(power > 0.0)) {
    throw ConfigError("pilot power must be positive");
  }
  const std::size_t count = pilot_count(n_p, n_s);
  PilotFrame frame{n_p, n_s, power, {}};
  frame.pilots.reserve(count);
  for (std::size_t l = 0; l < count; ++l) {
    ComplexVec x = ComplexVec::Zero(tx.n);
    x(static_cast<Eigen::Index>(l % static_cast<std::size_t>(tx.n))) = std::sqrt(power);
    frame.pilots.push_back(std::move(x));
  }
  return frame;
}

}  // namespace phyauth::channel
