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

#include <cstdint>
#include <map>
#include <span>

#include "phyauth/channel.hpp"
#include "phyauth/crypto.hpp"
#include "phyauth/estimation.hpp"
#include "phyauth/geometry.hpp"
#include "phyauth/random.hpp"
#include "phyauth/wire.hpp"

namespace phyauth::auth {

using crypto::ByteView;
using crypto::Bytes;
using geometry::GeoCoord;

struct Identity {
  Bytes id;
  Bytes public_key;
  Bytes certificate;
};

struct Credentials {
  Identity identity;
  Bytes secret_key;
};

/// Certificate bytes: field(public_key) | field(CA signature over
/// field(id) | field(public_key)).
class CertificateAuthority {
 public:
  CertificateAuthority(const crypto::SignatureScheme& scheme, RandomSource& rng);

  Credentials issue(Bytes id, RandomSource& rng) const;
  const Bytes& public_key() const noexcept { return keys_.public_key; }

 private:
  const crypto::SignatureScheme* scheme_;
  crypto::KeyPair keys_;
};

/// Parsed certificate. Throws ParseError on malformed input.
struct Certificate {
  Bytes public_key;
  Bytes ca_signature;

  static Certificate parse(ByteView bytes);
};

Bytes certificate_body(ByteView id, ByteView public_key);

/// Beacon section at the head of every payload:
/// lon (f64) | lat (f64) | speed (f64) | body (rest of the payload).
struct Beacon {
  GeoCoord gps{};
  double speed = 0.0;  // carried, not used by the authentication math
  Bytes body;
};

inline constexpr std::size_t kBeaconHeaderBytes = 24;

Bytes encode_beacon(const Beacon& beacon);
/// Throws MalformedBeacon when the payload is too short or the coordinates
/// are not valid radians.
Beacon decode_beacon(ByteView payload);

/// <ID | M | sig | T | C> with 32-bit big-endian length prefixes on the byte
/// fields and T as a raw 64-bit big-endian millisecond count.
struct SignedMessage {
  Bytes id;
  Bytes payload;
  Bytes signature;  // over field(M) | T
  std::uint64_t timestamp_ms = 0;
  Bytes certificate;
};

Bytes serialize(const SignedMessage& msg);
SignedMessage parse_message(ByteView bytes);

/// Bytes covered by the payload signature.
Bytes signed_portion(ByteView payload, std::uint64_t timestamp_ms);

SignedMessage sign_message(const Credentials& creds, const crypto::SignatureScheme& scheme,
                           Bytes payload, std::uint64_t timestamp_ms);

inline constexpr std::uint64_t kDefaultFreshnessMs = 5000;

/// Conventional PKI check: the CA signature on the certificate (binding the
/// message ID to the public key), the payload signature under the certified
/// key, and |now - T| within the freshness window. Throws ParseError when the
/// certificate is malformed.
bool pki_verify(const SignedMessage& msg, ByteView ca_public_key,
                const crypto::SignatureScheme& scheme, std::uint64_t now_ms,
                std::uint64_t freshness_ms = kDefaultFreshnessMs);

/// Hypothesis labels: H1 means the signal arrives from the claimed direction
/// (the claim is authentic); H0 means it does not.
enum class Hypothesis { H0, H1 };

struct WaldOutcome {
  double statistic = 0.0;
  Hypothesis decision = Hypothesis::H0;
};

/// |theta_hat - theta_b| / sqrt(crb), deciding H1 when the statistic is at
/// most alpha (the boundary counts as H1).
WaldOutcome wald_test(double theta_hat, double theta_b, double crb, double alpha);

/// P(|T - theta_b| <= alpha sqrt(crb_test)) for T truncated-normal on the ULA
/// support with mean `centre` and variance `crb_spread`.
double acceptance_probability(double alpha, double centre, double crb_spread, double theta_b,
                              double crb_test);

/// P_D: acceptance probability when the estimate is centred on theta_b.
double detection_probability(double alpha, double theta_b, double crb);

/// P_F: acceptance probability when the transmitter actually sits at
/// `theta_true`. The single-CRB form uses `crb_true` both for the spread of
/// the estimate and in the test statistic.
double false_alarm_probability(double alpha, double theta_true, double theta_b, double crb_true);
double false_alarm_probability(double alpha, double theta_true, double theta_b, double crb_true,
                               double crb_test);

struct ReceiverPose {
  GeoCoord gps{};
  double theta_r_north = 0.0;
};

/// theta_b for a transmitter claiming `claimed`, folded onto the ULA support.
double claimed_aoa(const GeoCoord& claimed, const ReceiverPose& pose);

struct AoaRecord {
  Bytes id;
  GeoCoord gps{};
  double theta_b = 0.0;
  double theta_hat = 0.0;
  double crb = 0.0;
  std::uint64_t updated_at_ms = 0;
};

/// Table of expected versus estimated AoAs, one row per identity that has
/// passed PKI. Not synchronised; one table per receiver.
class AoaRecordSet {
 public:
  const AoaRecord* find(ByteView id) const;

  /// Inserts or refreshes the row for `id`; theta_b is recomputed from `gps`.
  const AoaRecord& observe(const Bytes& id, const GeoCoord& gps, const ReceiverPose& pose,
                           double theta_hat, double crb, std::uint64_t now_ms);

  std::size_t size() const noexcept { return rows_.size(); }
  auto begin() const { return rows_.begin(); }
  auto end() const { return rows_.end(); }

 private:
  std::map<Bytes, AoaRecord> rows_;
};

enum class Decision { Accept, RejectPki, RejectAoa };

struct AuthVerdict {
  bool pki_ok = false;
  bool aoa_ok = false;
  double wald_statistic = 0.0;
  double threshold_alpha = 0.0;
  Decision decision = Decision::RejectPki;
  double theta_b = 0.0;
  double theta_hat = 0.0;
  double crb = 0.0;  // at theta_b
};

struct AuthContext {
  const crypto::SignatureScheme* scheme = nullptr;
  Bytes ca_public_key;
  std::uint64_t now_ms = 0;
  std::uint64_t freshness_ms = kDefaultFreshnessMs;
  const estimation::AoaEstimator* estimator = nullptr;
};

/// PKI first; messages that fail are dropped and leave the table untouched.
/// Otherwise theta_b comes from the claimed GPS, theta_hat from the pilots,
/// the table row is refreshed, and the Wald test (CRB at theta_b) decides.
/// Throws MalformedBeacon when a PKI-valid payload carries no beacon.
AuthVerdict authenticate(const SignedMessage& msg, const channel::PilotObservation& obs,
                         AoaRecordSet& table, double alpha, const ReceiverPose& pose,
                         const AuthContext& ctx);

}  // namespace phyauth::auth
