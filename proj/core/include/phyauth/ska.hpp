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
#include <optional>
#include <string>
#include <vector>

#include "phyauth/auth.hpp"
#include "phyauth/channel.hpp"
#include "phyauth/crypto.hpp"
#include "phyauth/estimation.hpp"
#include "phyauth/geometry.hpp"
#include "phyauth/random.hpp"

namespace phyauth::ska {

using auth::Credentials;
using auth::ReceiverPose;
using auth::SignedMessage;
using crypto::ByteView;
using crypto::Bytes;
using geometry::GeoCoord;

// ---------------------------------------------------------------------------
// Angle quantisation and key derivation

inline constexpr int kDefaultAngleBits = 7;
inline constexpr int kMaxAngleBits = 16;  // the wire format carries 2 bytes

/// floor((theta + pi/2) / pi * 2^m), clamped to [0, 2^m - 1].
std::uint16_t quantize_angle(double theta, int m_bits);

/// K' = SHA-256(K | q_a | q_b), indices as 16-bit big-endian. Throws
/// std::invalid_argument for an empty K.
Bytes derive_session_key(ByteView k_raw, std::uint16_t q_a, std::uint16_t q_b);

// ---------------------------------------------------------------------------
// Messages

enum class MessageKind : std::uint8_t {
  PubKeyRequest = 1,
  PubKeyReply = 2,
  KeyTransport = 3,
};

const char* to_string(MessageKind kind) noexcept;

/// Body carried after the beacon section of a SignedMessage payload:
/// kind (u8) | field(public_key) | field(ciphertext).
/// Reply plaintext: q_a (u16). KeyTransport plaintext: field(K) | q_b (u16).
struct SkaMessage {
  MessageKind kind = MessageKind::PubKeyRequest;
  GeoCoord claimed_gps{};
  Bytes public_key;
  Bytes ciphertext;
};

Bytes encode_payload(const SkaMessage& msg);
SkaMessage decode_payload(ByteView payload);

// ---------------------------------------------------------------------------
// Session state machine

enum class Role { Initiator, Responder };

/// Protocol step a session is waiting to perform.
enum class Step : int {
  SelectKeys = 1,
  SendRequest = 2,
  VerifyRequest = 3,
  SendReply = 4,
  VerifyReply = 5,
  SendKeyTransport = 6,
  VerifyKeyTransport = 7,
  DeriveKey = 8,
  Aborted = 9,
  Completed = 10,
};

struct WaldCheck {
  int step = 0;
  bool pki_ok = false;
  double theta_b = 0.0;
  double theta_hat = 0.0;
  double crb = 0.0;
  double statistic = 0.0;
  double alpha = 0.0;
  bool passed = false;
};

struct LocalEstimate {
  double theta_hat = 0.0;
  double crb = 0.0;  // variance to use in the Wald statistic
};

struct SkaSession {
  Role role = Role::Initiator;
  Step step = Step::SelectKeys;
  std::vector<Credentials> preloaded;
  std::optional<std::size_t> selected;
  ReceiverPose pose{};
  GeoCoord claimed_gps{};  // position announced in outgoing beacons
  bool check_aoa = true;   // false for an adversary's relay sessions
  int m_bits = kDefaultAngleBits;

  std::optional<Bytes> peer_public_key;
  std::optional<double> theta_hat_peer;
  std::optional<Bytes> k_raw;
  std::optional<std::uint16_t> q_a;  // responder's quantisation of the initiator's AoA
  std::optional<std::uint16_t> q_b;  // initiator's quantisation of the responder's AoA
  std::optional<Bytes> k_prime;

  std::optional<int> aborted_at;
  std::string abort_reason;
  std::vector<WaldCheck> checks;

  static SkaSession initiator(std::vector<Credentials> keys, ReceiverPose pose,
                              int m_bits = kDefaultAngleBits);
  static SkaSession responder(std::vector<Credentials> keys, ReceiverPose pose,
                              int m_bits = kDefaultAngleBits);

  bool finished() const noexcept { return step == Step::Aborted || step == Step::Completed; }
  const Credentials& own() const;
};

struct SkaEnvironment {
  const crypto::SignatureScheme* scheme = nullptr;
  const crypto::PublicKeyCipher* cipher = nullptr;
  Bytes ca_public_key;
  std::uint64_t now_ms = 0;
  std::uint64_t freshness_ms = auth::kDefaultFreshnessMs;
  RandomSource* rng = nullptr;  // key selection and session key K
};

struct Advance {
  SkaSession session;
  std::optional<SignedMessage> outgoing;
};

/// Runs the session forward until it needs the next message.
///
/// Initiator: (none) -> steps 1-2, emits PubKeyRequest; (PubKeyReply,
/// estimate) -> step 5 check, step 6 KeyTransport, step 8 derive, Completed.
/// Responder: (PubKeyRequest, estimate) -> step 3 check, step 4 PubKeyReply;
/// (KeyTransport, estimate) -> step 7 check, step 8 derive, Completed.
/// A failed PKI or Wald check, an unexpected message kind or a malformed
/// message moves the session to Aborted. Finished sessions are returned
/// unchanged and emit nothing.
Advance advance(SkaSession session, const std::optional<SignedMessage>& incoming,
                const std::optional<LocalEstimate>& estimate, double alpha,
                const SkaEnvironment& env);

/// Claimed position carried in a message's beacon section.
GeoCoord claimed_position(const SignedMessage& msg);

// ---------------------------------------------------------------------------
// Link simulation

/// Radio link shared by all nodes in a scenario; the receiver's oracle R_z
/// comes from `k` and `noise_var`.
struct LinkModel {
  geometry::ArrayConfig array{};
  double k = 100.0;
  double noise_var = 0.01;
  int n_p = 1;
  int n_s = 10;
  double power = 1.0;
  channel::Fading fading = channel::Fading::PerPilot;
  estimation::AngleGrid grid{};
  estimation::MlCriterion criterion = estimation::MlCriterion::PilotWeighted;

  estimation::AoaEstimator estimator() const;
  /// CRB at theta for the nominal frame (power P, L pilots, R_z at that power).
  double nominal_crb(double theta) const;
};

/// Simulates one pilot burst from `tx` to `rx` and returns the ML estimate
/// with the CRB evaluated at the AoA implied by `claimed`.
LocalEstimate observe_link(const LinkModel& link, const GeoCoord& tx, const ReceiverPose& rx,
                           const GeoCoord& claimed, RandomSource& rng);

// ---------------------------------------------------------------------------
// Drivers

struct Participants {
  const crypto::SignatureScheme* scheme = nullptr;
  const crypto::PublicKeyCipher* cipher = nullptr;
  Bytes ca_public_key;
  Credentials a;
  Credentials b;
  Credentials e;  // adversary; carries a stolen identity (see make_participants)
};

/// Issues credentials for A and B under a fresh CA. The adversary signs with
/// its own key but presents A's identity and certificate, so it only clears
/// PKI under a permissive scheme.
Participants make_participants(const crypto::SignatureScheme& scheme,
                               const crypto::PublicKeyCipher& cipher, RandomSource& rng);

struct HonestOutcome {
  SkaSession a;
  SkaSession b;
  bool completed = false;
  bool keys_match = false;
  std::vector<std::string> trace;
};

HonestOutcome run_honest(const Participants& who, const ReceiverPose& a, const ReceiverPose& b,
                         const LinkModel& link, double alpha, int m_bits, RandomSource& rng,
                         bool with_trace = false);

struct MitmOutcome {
  bool attack_succeeds = false;
  int aborted_at_step = 0;  // 3, 5 or 7 when the attack fails
  std::vector<WaldCheck> checks;
  std::vector<std::string> trace;
};

/// E relays between A and B with its own key material, claiming A's position
/// towards B and B's position towards A. Success requires clearing the
/// checks at steps 3 (B), 5 (A) and 7 (B).
MitmOutcome simulate_mitm(const Participants& who, const ReceiverPose& a, const ReceiverPose& b,
                          const GeoCoord& e, const LinkModel& link, double alpha, int m_bits,
                          RandomSource& rng, bool with_trace = false);

// ---------------------------------------------------------------------------
// Vulnerable region

struct VulnerableRegion {
  GeoCoord pos_a{};
  GeoCoord pos_b{};
  double half_width_a = 0.0;  // alpha sqrt(CRB) at A
  double half_width_b = 0.0;
};

VulnerableRegion make_region(const ReceiverPose& a, const ReceiverPose& b, const LinkModel& link,
                             double alpha);

/// Double-cone test: the bearing of p seen from each endpoint lies within
/// that endpoint's half-width of the bearing to the other endpoint. Points
/// coinciding with an endpoint are inside. Throws DegenerateGeometry when
/// the endpoints coincide.
bool in_vulnerable_region(const GeoCoord& p, const VulnerableRegion& region);

}  // namespace phyauth::ska
