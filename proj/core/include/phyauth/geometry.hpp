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

#include "phyauth/linalg.hpp"

namespace phyauth::geometry {

/// Uniform linear array: `n` elements spaced `spacing_ratio` wavelengths apart.
struct ArrayConfig {
  int n = 4;
  double spacing_ratio = 0.5;

  /// Throws DomainError unless n >= 2 and spacing_ratio > 0.
  void validate() const;
};

/// Position on a spherical earth, both fields in radians.
struct GeoCoord {
  double lon = 0.0;
  double lat = 0.0;

  void validate() const;
  friend bool operator==(const GeoCoord&, const GeoCoord&) = default;
};

inline constexpr double kEarthRadiusMeters = 6371008.8;

/// Wraps any angle to (-pi, pi].
double wrap_angle(double radians) noexcept;

/// True for angles inside the ULA support [-pi/2, pi/2].
bool is_visible(double theta) noexcept;

/// Maps a direction in (-pi, pi] onto the ULA support by reflecting across the
/// array axis: a linear array cannot tell theta from pi - theta.
double fold_to_visible(double theta) noexcept;

/// a(theta) with a[m] = exp(-j 2 pi (d/lambda) m sin(theta)), m = 0..n-1.
/// Throws DomainError outside [-pi/2, pi/2].
ComplexVec steering_vector(double theta, const ArrayConfig& cfg);

/// d a(theta) / d theta; element m is (-j 2 pi (d/lambda) m cos(theta)) a[m].
ComplexVec steering_derivative(double theta, const ArrayConfig& cfg);

/// Bearing of `rx` seen from `tx`, clockwise from true north:
///   atan2(cos(lat_r) sin(lon_r - lon_t),
///         cos(lat_t) sin(lat_r) - sin(lat_t) cos(lat_r) cos(lon_r - lon_t)).
/// Swap the arguments for the reciprocal bearing. Throws DegenerateGeometry
/// when the two points coincide.
double heading_angle(const GeoCoord& tx, const GeoCoord& rx);

/// Expected AoA theta_b = theta_h + theta_r_north, wrapped to (-pi, pi].
///
/// `theta_r_north` is the additive orientation offset of the receiver array
/// (counterclockwise-positive from true north to the array broadside). The
/// result may fall outside the visible range; callers check with is_visible.
double expected_aoa(double theta_h, double theta_r_north) noexcept;

/// Point reached from `origin` after travelling `distance_m` metres along the
/// great circle leaving at `bearing` (clockwise from north).
GeoCoord destination(const GeoCoord& origin, double bearing, double distance_m);

/// Great-circle distance in metres (haversine).
double distance_m(const GeoCoord& a, const GeoCoord& b) noexcept;

}  // namespace phyauth::geometry
