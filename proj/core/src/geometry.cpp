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

#include "phyauth/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "phyauth/errors.hpp"

namespace phyauth::geometry {

void ArrayConfig::validate() const {
  if (n < 2) {
    throw DomainError("array needs at least two elements, got " + std::to_string(n));
  }
  if (!(spacing_ratio > 0.0) || !std::isfinite(spacing_ratio)) {
    throw DomainError("element spacing ratio must be positive");
  }
}

void GeoCoord::validate() const {
  if (!(std::abs(lat) <= kPi / 2) || !(std::abs(lon) <= kPi)) {
    throw DomainError("coordinate out of range");
  }
}

double wrap_angle(double radians) noexcept {
  double r = std::remainder(radians, 2.0 * kPi);  // [-pi, pi]
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

bool is_visible(double theta) noexcept { return theta >= -kPi / 2 && theta <= kPi / 2; }

double fold_to_visible(double theta) noexcept {
  const double t = wrap_angle(theta);
  if (t > kPi / 2) return kPi - t;
  if (t < -kPi / 2) return -kPi - t;
  return t;
}

namespace {

void check_aoa(double theta) {
  if (!is_visible(theta) || !std::isfinite(theta)) {
    throw DomainError("AoA " + std::to_string(theta) + " rad outside [-pi/2, pi/2]");
  }
}

}  // namespace

ComplexVec steering_vector(double theta, const ArrayConfig& cfg) {
  cfg.validate();
  check_aoa(theta);
  const double phase = -2.0 * kPi * cfg.spacing_ratio * std::sin(theta);
  ComplexVec a(cfg.n);
  a(0) = Complex(1.0, 0.0);
  for (int m = 1; m < cfg.n; ++m) {
    // Evaluate each phase directly; a running product drifts off the unit circle.
    a(m) = std::polar(1.0, phase * m);
  }
  return a;
}

ComplexVec steering_derivative(double theta, const ArrayConfig& cfg) {
  ComplexVec a = steering_vector(theta, cfg);
  // cos(pi/2) is not exactly zero in floating point; the array axis is.
  const double cosine = std::abs(theta) == kPi / 2 ? 0.0 : std::cos(theta);
  const double c = -2.0 * kPi * cfg.spacing_ratio * cosine;
  for (int m = 0; m < cfg.n; ++m) {
    a(m) *= Complex(0.0, c * m);
  }
  return a;
}

double heading_angle(const GeoCoord& tx, const GeoCoord& rx) {
  const double dlon = rx.lon - tx.lon;
  const double nu = std::cos(rx.lat) * std::sin(dlon);
  const double upsilon =
      std::cos(tx.lat) * std::sin(rx.lat) - std::sin(tx.lat) * std::cos(rx.lat) * std::cos(dlon);
  if (std::hypot(nu, upsilon) < 1e-15) {
    throw DegenerateGeometry("bearing between coincident positions is undefined");
  }
  return std::atan2(nu, upsilon);
}

double expected_aoa(double theta_h, double theta_r_north) noexcept {
  return wrap_angle(theta_h + theta_r_north);
}

GeoCoord destination(const GeoCoord& origin, double bearing, double distance) {
  const double delta = distance / kEarthRadiusMeters;
  const double lat2 = std::asin(std::sin(origin.lat) * std::cos(delta) +
                                std::cos(origin.lat) * std::sin(delta) * std::cos(bearing));
  const double lon2 =
      origin.lon + std::atan2(std::sin(bearing) * std::sin(delta) * std::cos(origin.lat),
                              std::cos(delta) - std::sin(origin.lat) * std::sin(lat2));
  return {wrap_angle(lon2), lat2};
}

double distance_m(const GeoCoord& a, const GeoCoord& b) noexcept {
  const double s_lat = std::sin((b.lat - a.lat) / 2);
  const double s_lon = std::sin((b.lon - a.lon) / 2);
  const double h = s_lat * s_lat + std::cos(a.lat) * std::cos(b.lat) * s_lon * s_lon;
  return 2.0 * kEarthRadiusMeters * std::asin(std::min(1.0, std::sqrt(h)));
}

}  // namespace phyauth::geometry
