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

#include "phyauth/auth.hpp"

#include <cmath>
#include <limits>

#include "phyauth/errors.hpp"
#include "phyauth/stats.hpp"

namespace phyauth::auth {

Bytes certificate_body(ByteView id, ByteView public_key) {
  wire::Writer w;
  w.field(id);
  w.field(public_key);
  return std::move(w).take();
}

CertificateAuthority::CertificateAuthority(const crypto::SignatureScheme& scheme,
                                           RandomSource& rng)
    : scheme_(&scheme), keys_(scheme.generate(rng)) {}

Credentials CertificateAuthority::issue(Bytes id, RandomSource& rng) const {
  crypto::KeyPair kp = scheme_->generate(rng);
  const Bytes ca_sig = scheme_->sign(keys_.secret_key, certificate_body(id, kp.public_key));
  wire::Writer cert;
  cert.field(kp.public_key);
  cert.field(ca_sig);
  Credentials out;
  out.identity = Identity{std::move(id), kp.public_key, std::move(cert).take()};
  out.secret_key = std::move(kp.secret_key);
  return out;
}

Certificate Certificate::parse(ByteView bytes) {
  wire::Reader r(bytes);
  Certificate c;
  c.public_key = r.field();
  c.ca_signature = r.field();
  r.expect_done();
  return c;
}

Bytes encode_beacon(const Beacon& beacon) {
  wire::Writer w;
  w.f64(beacon.gps.lon);
  w.f64(beacon.gps.lat);
  w.f64(beacon.speed);
  w.raw(beacon.body);
  return std::move(w).take();
}

Beacon decode_beacon(ByteView payload) {
  if (payload.size() < kBeaconHeaderBytes) {
    throw MalformedBeacon("payload carries no beacon section");
  }
  wire::Reader r(payload);
  Beacon b;
  b.gps.lon = r.f64();
  b.gps.lat = r.f64();
  b.speed = r.f64();
  b.body = r.raw(r.remaining());
  if (!std::isfinite(b.gps.lon) || !std::isfinite(b.gps.lat) || std::abs(b.gps.lat) > kPi / 2 ||
      std::abs(b.gps.lon) > kPi) {
    throw MalformedBeacon("beacon coordinates out of range");
  }
  return b;
}

Bytes serialize(const SignedMessage& msg) {
  wire::Writer w;
  w.field(msg.id);
  w.field(msg.payload);
  w.field(msg.signature);
  w.u64(msg.timestamp_ms);
  w.field(msg.certificate);
  return std::move(w).take();
}

SignedMessage parse_message(ByteView bytes) {
  wire::Reader r(bytes);
  SignedMessage msg;
  msg.id = r.field();
  msg.payload = r.field();
  msg.signature = r.field();
  msg.timestamp_ms = r.u64();
  msg.certificate = r.field();
  r.expect_done();
  return msg;
}

Bytes signed_portion(ByteView payload, std::uint64_t timestamp_ms) {
  wire::Writer w;
  w.field(payload);
  w.u64(timestamp_ms);
  return std::move(w).take();
}

SignedMessage sign_message(const Credentials& creds, const crypto::SignatureScheme& scheme,
                           Bytes payload, std::uint64_t timestamp_ms) {
  SignedMessage msg;
  msg.id = creds.identity.id;
  msg.signature = scheme.sign(creds.secret_key, signed_portion(payload, timestamp_ms));
  msg.payload = std::move(payload);
  msg.timestamp_ms = timestamp_ms;
  msg.certificate = creds.identity.certificate;
  return msg;
}

bool pki_verify(const SignedMessage& msg, ByteView ca_public_key,
                const crypto::SignatureScheme& scheme, std::uint64_t now_ms,
                std::uint64_t freshness_ms) {
  const Certificate cert = Certificate::parse(msg.certificate);
  const std::uint64_t age =
      now_ms >= msg.timestamp_ms ? now_ms - msg.timestamp_ms : msg.timestamp_ms - now_ms;
  if (age > freshness_ms) return false;
  if (!scheme.verify(ca_public_key, certificate_body(msg.id, cert.public_key), cert.ca_signature)) {
    return false;
  }
  return scheme.verify(cert.public_key, signed_portion(msg.payload, msg.timestamp_ms),
                       msg.signature);
}

WaldOutcome wald_test(double theta_hat, double theta_b, double crb, double alpha) {
  if (!(crb > 0.0) || !(alpha > 0.0)) {
    throw DomainError("Wald test needs crb > 0 and alpha > 0");
  }
  const double statistic = std::abs(theta_hat - theta_b) / std::sqrt(crb);
  return {statistic, statistic <= alpha ? Hypothesis::H1 : Hypothesis::H0};
}

double acceptance_probability(double alpha, double centre, double crb_spread, double theta_b,
                              double crb_test) {
  if (!(crb_spread > 0.0) || !(crb_test > 0.0)) {
    throw DomainError("acceptance probability needs positive variances");
  }
  if (std::isinf(crb_test)) return 1.0;
  const double half_width = alpha * std::sqrt(crb_test);
  return stats::truncated_normal_interval(theta_b - half_width, theta_b + half_width, centre,
                                          std::sqrt(crb_spread), -kPi / 2, kPi / 2);
}

double detection_probability(double alpha, double theta_b, double crb) {
  return acceptance_probability(alpha, theta_b, crb, theta_b, crb);
}

double false_alarm_probability(double alpha, double theta_true, double theta_b, double crb_true) {
  return acceptance_probability(alpha, theta_true, crb_true, theta_b, crb_true);
}

double false_alarm_probability(double alpha, double theta_true, double theta_b, double crb_true,
                               double crb_test) {
  return acceptance_probability(alpha, theta_true, crb_true, theta_b, crb_test);
}

double claimed_aoa(const GeoCoord& claimed, const ReceiverPose& pose) {
  return geometry::fold_to_visible(
      geometry::expected_aoa(geometry::heading_angle(claimed, pose.gps), pose.theta_r_north));
}

const AoaRecord* AoaRecordSet::find(ByteView id) const {
  auto it = rows_.find(Bytes(id.begin(), id.end()));
  return it == rows_.end() ? nullptr : &it->second;
}

const AoaRecord& AoaRecordSet::observe(const Bytes& id, const GeoCoord& gps,
                                       const ReceiverPose& pose, double theta_hat, double crb,
                                       std::uint64_t now_ms) {
  AoaRecord& row = rows_[id];
  if (row.id.empty() || !(row.gps == gps)) {
    row.theta_b = claimed_aoa(gps, pose);
  }
  row.id = id;
  row.gps = gps;
  row.theta_hat = theta_hat;
  row.crb = crb;
  row.updated_at_ms = now_ms;
  return row;
}

AuthVerdict authenticate(const SignedMessage& msg, const channel::PilotObservation& obs,
                         AoaRecordSet& table, double alpha, const ReceiverPose& pose,
                         const AuthContext& ctx) {
  if (ctx.scheme == nullptr || ctx.estimator == nullptr) {
    throw ConfigError("authentication context is incomplete");
  }
  AuthVerdict v;
  v.threshold_alpha = alpha;
  v.wald_statistic = std::numeric_limits<double>::quiet_NaN();
  v.pki_ok = pki_verify(msg, ctx.ca_public_key, *ctx.scheme, ctx.now_ms, ctx.freshness_ms);
  if (!v.pki_ok) {
    v.decision = Decision::RejectPki;
    return v;
  }

  const Beacon beacon = decode_beacon(msg.payload);
  const estimation::AoaEstimate est = ctx.estimator->estimate(obs);
  v.theta_b = claimed_aoa(beacon.gps, pose);
  v.theta_hat = est.theta_hat;
  v.crb = ctx.estimator->crb_at(v.theta_b, obs.frame);
  table.observe(msg.id, beacon.gps, pose, est.theta_hat, v.crb, ctx.now_ms);

  if (std::isinf(v.crb)) {
    // On the array axis the bound carries no angular information.
    v.wald_statistic = 0.0;
    v.aoa_ok = true;
  } else {
    const WaldOutcome w = wald_test(v.theta_hat, v.theta_b, v.crb, alpha);
    v.wald_statistic = w.statistic;
    v.aoa_ok = w.decision == Hypothesis::H1;
  }
  v.decision = v.aoa_ok ? Decision::Accept : Decision::RejectAoa;
  return v;
}

}  // namespace phyauth::auth
