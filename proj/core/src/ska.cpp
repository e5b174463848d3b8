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

#include "phyauth/ska.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <utility>

#include "phyauth/errors.hpp"
#include "phyauth/wire.hpp"

namespace phyauth::ska {

namespace {

constexpr std::size_t kSessionKeyBytes = 32;

std::uint16_t read_index(wire::Reader& r, int m_bits) {
  const std::uint16_t q = r.u16();
  if (q >= (1U << m_bits)) {
    throw ParseError("quantised angle index out of range");
  }
  return q;
}

Advance abort_session(SkaSession s, int step, std::string reason) {
  s.step = Step::Aborted;
  s.aborted_at = step;
  s.abort_reason = std::move(reason);
  return Advance{std::move(s), std::nullopt};
}

SignedMessage emit(const SkaSession& s, const SkaEnvironment& env, SkaMessage body) {
  body.claimed_gps = s.claimed_gps;
  return auth::sign_message(s.own(), *env.scheme, encode_payload(body), env.now_ms);
}

struct Received {
  SkaMessage body;
  WaldCheck check;
};

/// PKI plus Wald check of `msg` at `step`. Returns nullopt and aborts the
/// session (through `reason`) on failure.
std::optional<Received> verify_incoming(SkaSession& s, const SignedMessage& msg,
                                        MessageKind expected, int step,
                                        const std::optional<LocalEstimate>& estimate,
                                        double alpha, const SkaEnvironment& env,
                                        std::string& reason) {
  SkaMessage body;
  try {
    body = decode_payload(msg.payload);
  } catch (const ParseError& e) {
    reason = std::string("malformed message: ") + e.what();
    return std::nullopt;
  }
  if (body.kind != expected) {
    reason = std::string("protocol violation: expected ") + to_string(expected) + ", got " +
             to_string(body.kind);
    return std::nullopt;
  }

  WaldCheck check;
  check.step = step;
  check.alpha = alpha;
  try {
    check.pki_ok = auth::pki_verify(msg, env.ca_public_key, *env.scheme, env.now_ms,
                                    env.freshness_ms);
  } catch (const ParseError&) {
    check.pki_ok = false;
  }
  if (!check.pki_ok) {
    s.checks.push_back(check);
    reason = "PKI verification failed";
    return std::nullopt;
  }
  const auth::Certificate cert = auth::Certificate::parse(msg.certificate);
  if (body.public_key != cert.public_key) {
    s.checks.push_back(check);
    reason = "announced public key differs from the certified key";
    return std::nullopt;
  }

  check.theta_b = auth::claimed_aoa(body.claimed_gps, s.pose);
  if (s.check_aoa) {
    if (!estimate) {
      throw ProtocolViolation("an AoA estimate is required to verify this message");
    }
    check.theta_hat = estimate->theta_hat;
    check.crb = estimate->crb;
    if (std::isinf(check.crb)) {
      check.passed = true;
    } else {
      const auth::WaldOutcome w = auth::wald_test(check.theta_hat, check.theta_b, check.crb, alpha);
      check.statistic = w.statistic;
      check.passed = w.decision == auth::Hypothesis::H1;
    }
  } else {
    check.passed = true;
  }
  s.checks.push_back(check);
  if (!check.passed) {
    reason = "AoA check failed";
    return std::nullopt;
  }
  s.theta_hat_peer = check.theta_hat;
  return Received{std::move(body), check};
}

Bytes random_key(RandomSource& rng) {
  Bytes k(kSessionKeyBytes);
  rng.fill(k);
  return k;
}

}  // namespace

std::uint16_t quantize_angle(double theta, int m_bits) {
  if (m_bits < 1 || m_bits > kMaxAngleBits) {
    throw DomainError("quantiser bit count must lie in [1, 16]");
  }
  if (!std::isfinite(theta) || std::abs(theta) > kPi / 2 + 1e-12) {
    throw DomainError("angle outside [-pi/2, pi/2]");
  }
  const double levels = std::ldexp(1.0, m_bits);
  const double q = std::floor((theta + kPi / 2) / kPi * levels);
  return static_cast<std::uint16_t>(std::clamp(q, 0.0, levels - 1.0));
}

Bytes derive_session_key(ByteView k_raw, std::uint16_t q_a, std::uint16_t q_b) {
  if (k_raw.empty()) {
    throw std::invalid_argument("session key material is empty");
  }
  wire::Writer w;
  w.raw(k_raw);
  w.u16(q_a);
  w.u16(q_b);
  return crypto::sha256(w.bytes());
}

const char* to_string(MessageKind kind) noexcept {
  switch (kind) {
    case MessageKind::PubKeyRequest:
      return "PubKeyRequest";
    case MessageKind::PubKeyReply:
      return "PubKeyReply";
    case MessageKind::KeyTransport:
      return "KeyTransport";
  }
  return "Unknown";
}

Bytes encode_payload(const SkaMessage& msg) {
  wire::Writer body;
  body.u8(static_cast<std::uint8_t>(msg.kind));
  body.field(msg.public_key);
  body.field(msg.ciphertext);
  return auth::encode_beacon(auth::Beacon{msg.claimed_gps, 0.0, std::move(body).take()});
}

SkaMessage decode_payload(ByteView payload) {
  const auth::Beacon beacon = auth::decode_beacon(payload);
  wire::Reader r(beacon.body);
  SkaMessage msg;
  const std::uint8_t kind = r.u8();
  if (kind < 1 || kind > 3) {
    throw ParseError("unknown key agreement message kind");
  }
  msg.kind = static_cast<MessageKind>(kind);
  msg.claimed_gps = beacon.gps;
  msg.public_key = r.field();
  msg.ciphertext = r.field();
  r.expect_done();
  return msg;
}

GeoCoord claimed_position(const SignedMessage& msg) {
  return auth::decode_beacon(msg.payload).gps;
}

SkaSession SkaSession::initiator(std::vector<Credentials> keys, ReceiverPose pose, int m_bits) {
  if (keys.empty()) {
    throw std::invalid_argument("a session needs at least one preloaded key pair");
  }
  SkaSession s;
  s.role = Role::Initiator;
  s.step = Step::SelectKeys;
  s.preloaded = std::move(keys);
  s.pose = pose;
  s.claimed_gps = pose.gps;
  s.m_bits = m_bits;
  return s;
}

SkaSession SkaSession::responder(std::vector<Credentials> keys, ReceiverPose pose, int m_bits) {
  SkaSession s = initiator(std::move(keys), pose, m_bits);
  s.role = Role::Responder;
  s.step = Step::VerifyRequest;
  return s;
}

const Credentials& SkaSession::own() const {
  if (!selected) {
    throw ProtocolViolation("no key pair selected yet");
  }
  return preloaded.at(*selected);
}

Advance advance(SkaSession s, const std::optional<SignedMessage>& incoming,
                const std::optional<LocalEstimate>& estimate, double alpha,
                const SkaEnvironment& env) {
  if (s.finished()) {
    return Advance{std::move(s), std::nullopt};
  }
  if (env.scheme == nullptr || env.cipher == nullptr || env.rng == nullptr) {
    throw std::invalid_argument("key agreement environment is incomplete");
  }
  const auto select_keys = [&] {
    s.selected = static_cast<std::size_t>(env.rng->next_u64() % s.preloaded.size());
  };
  const int here = static_cast<int>(s.step);
  std::string reason;

  switch (s.step) {
    case Step::SelectKeys: {
      if (incoming) {
        return abort_session(std::move(s), here, "protocol violation: initiator got a message");
      }
      select_keys();
      s.step = Step::SendRequest;
      SignedMessage out =
          emit(s, env, SkaMessage{MessageKind::PubKeyRequest, {}, s.own().identity.public_key, {}});
      s.step = Step::VerifyReply;
      return Advance{std::move(s), std::move(out)};
    }

    case Step::VerifyRequest: {
      if (!incoming) {
        throw ProtocolViolation("responder is waiting for a request");
      }
      auto got = verify_incoming(s, *incoming, MessageKind::PubKeyRequest, 3, estimate, alpha,
                                 env, reason);
      if (!got) {
        return abort_session(std::move(s), 3, reason);
      }
      s.peer_public_key = got->body.public_key;
      s.q_a = quantize_angle(got->check.theta_hat, s.m_bits);
      select_keys();
      s.step = Step::SendReply;
      wire::Writer pt;
      pt.u16(*s.q_a);
      SignedMessage out = emit(s, env,
                               SkaMessage{MessageKind::PubKeyReply, {}, s.own().identity.public_key,
                                          env.cipher->seal(*s.peer_public_key, pt.bytes())});
      s.step = Step::VerifyKeyTransport;
      return Advance{std::move(s), std::move(out)};
    }

    case Step::VerifyReply: {
      if (!incoming) {
        throw ProtocolViolation("initiator is waiting for a reply");
      }
      auto got =
          verify_incoming(s, *incoming, MessageKind::PubKeyReply, 5, estimate, alpha, env, reason);
      if (!got) {
        return abort_session(std::move(s), 5, reason);
      }
      const auto plain = env.cipher->open(s.own().identity.public_key, s.own().secret_key,
                                          got->body.ciphertext);
      if (!plain) {
        return abort_session(std::move(s), 5, "reply does not decrypt");
      }
      try {
        wire::Reader r(*plain);
        s.q_a = read_index(r, s.m_bits);
        r.expect_done();
      } catch (const ParseError& e) {
        return abort_session(std::move(s), 5, std::string("malformed reply: ") + e.what());
      }
      s.peer_public_key = got->body.public_key;
      s.q_b = quantize_angle(got->check.theta_hat, s.m_bits);
      s.k_raw = random_key(*env.rng);

      s.step = Step::SendKeyTransport;
      wire::Writer pt;
      pt.field(*s.k_raw);
      pt.u16(*s.q_b);
      SignedMessage out = emit(s, env,
                               SkaMessage{MessageKind::KeyTransport, {}, s.own().identity.public_key,
                                          env.cipher->seal(*s.peer_public_key, pt.bytes())});
      s.step = Step::DeriveKey;
      s.k_prime = derive_session_key(*s.k_raw, *s.q_a, *s.q_b);
      s.step = Step::Completed;
      return Advance{std::move(s), std::move(out)};
    }

    case Step::VerifyKeyTransport: {
      if (!incoming) {
        throw ProtocolViolation("responder is waiting for the session key");
      }
      const Bytes expected_peer = *s.peer_public_key;
      auto got = verify_incoming(s, *incoming, MessageKind::KeyTransport, 7, estimate, alpha, env,
                                 reason);
      if (!got) {
        return abort_session(std::move(s), 7, reason);
      }
      if (got->body.public_key != expected_peer) {
        return abort_session(std::move(s), 7, "peer key changed during the exchange");
      }
      const auto plain = env.cipher->open(s.own().identity.public_key, s.own().secret_key,
                                          got->body.ciphertext);
      if (!plain) {
        return abort_session(std::move(s), 7, "key transport does not decrypt");
      }
      try {
        wire::Reader r(*plain);
        s.k_raw = r.field();
        s.q_b = read_index(r, s.m_bits);
        r.expect_done();
      } catch (const ParseError& e) {
        return abort_session(std::move(s), 7, std::string("malformed key transport: ") + e.what());
      }
      if (s.k_raw->empty()) {
        return abort_session(std::move(s), 7, "empty session key");
      }
      s.step = Step::DeriveKey;
      s.k_prime = derive_session_key(*s.k_raw, *s.q_a, *s.q_b);
      s.step = Step::Completed;
      return Advance{std::move(s), std::nullopt};
    }

    default:
      break;
  }
  throw ProtocolViolation("session is in a transient step");
}

// ---------------------------------------------------------------------------

estimation::AoaEstimator LinkModel::estimator() const {
  return estimation::AoaEstimator(
      estimation::ReceiverModel{array, k, noise_var, grid, criterion});
}

double LinkModel::nominal_crb(double theta) const {
  channel::RicianParams p;
  p.k = k;
  p.rx = array;
  p.tx = array;
  const ComplexMat r_z =
      (2.0 * p.sigma() * p.sigma() * power + noise_var) *
      ComplexMat::Identity(array.n, array.n);
  return estimation::crb(theta, p, power, channel::pilot_count(n_p, n_s), r_z);
}

LocalEstimate observe_link(const LinkModel& link, const GeoCoord& tx, const ReceiverPose& rx,
                           const GeoCoord& claimed, RandomSource& rng) {
  channel::RicianParams p;
  p.k = link.k;
  p.rx = link.array;
  p.tx = link.array;
  p.theta = auth::claimed_aoa(tx, rx);
  const channel::PilotFrame frame =
      channel::default_pilots(link.array, link.n_p, link.n_s, link.power, rng);
  const channel::PilotObservation obs = channel::transmit(frame, p, link.noise_var, rng, link.fading);
  const estimation::AoaEstimator est = link.estimator();
  const estimation::AoaEstimate e = est.estimate(obs);
  return LocalEstimate{e.theta_hat, est.crb_at(auth::claimed_aoa(claimed, rx), frame)};
}

// ---------------------------------------------------------------------------

Participants make_participants(const crypto::SignatureScheme& scheme,
                               const crypto::PublicKeyCipher& cipher, RandomSource& rng) {
  auth::CertificateAuthority ca(scheme, rng);
  Participants p;
  p.scheme = &scheme;
  p.cipher = &cipher;
  p.ca_public_key = ca.public_key();
  p.a = ca.issue(wire::to_bytes("vehicle-A"), rng);
  p.b = ca.issue(wire::to_bytes("vehicle-B"), rng);
  // E re-wraps A's certificate around its own key; the CA signature no
  // longer matches, which only a permissive verifier overlooks.
  const crypto::KeyPair own = scheme.generate(rng);
  const auth::Certificate stolen = auth::Certificate::parse(p.a.identity.certificate);
  wire::Writer forged;
  forged.field(own.public_key);
  forged.field(stolen.ca_signature);
  p.e.identity = auth::Identity{p.a.identity.id, own.public_key, std::move(forged).take()};
  p.e.secret_key = own.secret_key;
  return p;
}

namespace {

std::string fmt_check(const char* who, const WaldCheck& c) {
  if (!c.pki_ok) {
    return std::string(who) + " step " + std::to_string(c.step) + ": pki=fail -> reject";
  }
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "%s step %d: pki=ok theta_b=%.3f deg theta_hat=%.3f deg crb=%.3g W=%.3f "
                "alpha=%.2f -> %s",
                who, c.step, rad2deg(c.theta_b), rad2deg(c.theta_hat),
                c.crb, c.statistic, c.alpha, c.passed ? "accept" : "reject");
  return buf;
}

struct Tracer {
  bool on;
  std::vector<std::string>* out;
  void line(std::string s) const {
    if (on) out->push_back(std::move(s));
  }
  void sent(const char* from, const char* to, const SignedMessage& m) const {
    if (on) {
      out->push_back(std::string(from) + " -> " + to + ": " +
                     to_string(decode_payload(m.payload).kind) + " (" +
                     std::to_string(auth::serialize(m).size()) + " bytes)");
    }
  }
  void checked(const char* who, const SkaSession& s) const {
    if (on && !s.checks.empty()) out->push_back(fmt_check(who, s.checks.back()));
    if (on && s.step == Step::Aborted) {
      out->push_back(std::string(who) + " aborts at step " + std::to_string(*s.aborted_at) +
                     ": " + s.abort_reason);
    }
  }
};

SkaEnvironment environment(const Participants& who, RandomSource& rng) {
  SkaEnvironment env;
  env.scheme = who.scheme;
  env.cipher = who.cipher;
  env.ca_public_key = who.ca_public_key;
  env.now_ms = 0;
  env.rng = &rng;
  return env;
}

}  // namespace

HonestOutcome run_honest(const Participants& who, const ReceiverPose& a, const ReceiverPose& b,
                         const LinkModel& link, double alpha, int m_bits, RandomSource& rng,
                         bool with_trace) {
  HonestOutcome out;
  const Tracer t{with_trace, &out.trace};
  const SkaEnvironment env = environment(who, rng);

  SkaSession sa = SkaSession::initiator({who.a}, a, m_bits);
  SkaSession sb = SkaSession::responder({who.b}, b, m_bits);

  Advance r1 = advance(std::move(sa), std::nullopt, std::nullopt, alpha, env);
  t.sent("A", "B", *r1.outgoing);
  const LocalEstimate at_b = observe_link(link, a.gps, b, claimed_position(*r1.outgoing), rng);
  Advance r2 = advance(std::move(sb), r1.outgoing, at_b, alpha, env);
  t.checked("B", r2.session);
  if (r2.outgoing) {
    t.sent("B", "A", *r2.outgoing);
    const LocalEstimate at_a = observe_link(link, b.gps, a, claimed_position(*r2.outgoing), rng);
    r1 = advance(std::move(r1.session), r2.outgoing, at_a, alpha, env);
    t.checked("A", r1.session);
    if (r1.outgoing) {
      t.sent("A", "B", *r1.outgoing);
      const LocalEstimate at_b2 = observe_link(link, a.gps, b, claimed_position(*r1.outgoing), rng);
      r2 = advance(std::move(r2.session), r1.outgoing, at_b2, alpha, env);
      t.checked("B", r2.session);
    }
  }
  out.a = std::move(r1.session);
  out.b = std::move(r2.session);
  out.completed = out.a.step == Step::Completed && out.b.step == Step::Completed;
  out.keys_match = out.completed && out.a.k_prime == out.b.k_prime;
  if (out.completed) {
    t.line("A session key " + crypto::to_hex(*out.a.k_prime));
    t.line("B session key " + crypto::to_hex(*out.b.k_prime));
  }
  return out;
}

MitmOutcome simulate_mitm(const Participants& who, const ReceiverPose& a, const ReceiverPose& b,
                          const GeoCoord& e, const LinkModel& link, double alpha, int m_bits,
                          RandomSource& rng, bool with_trace) {
  MitmOutcome out;
  const Tracer t{with_trace, &out.trace};
  const SkaEnvironment env = environment(who, rng);
  const ReceiverPose e_pose{e, 0.0};

  // E keeps one relay session per victim and runs no AoA checks of its own.
  SkaSession e_as_a = SkaSession::initiator({who.e}, e_pose, m_bits);
  e_as_a.claimed_gps = a.gps;
  e_as_a.check_aoa = false;
  Credentials e_b = who.e;
  e_b.identity.id = who.b.identity.id;
  SkaSession e_as_b = SkaSession::responder({e_b}, e_pose, m_bits);
  e_as_b.claimed_gps = b.gps;
  e_as_b.check_aoa = false;

  const auto finish = [&](int step, const SkaSession& sa, const SkaSession& sb) {
    out.aborted_at_step = step;
    out.checks = sb.checks;
    out.checks.insert(out.checks.end(), sa.checks.begin(), sa.checks.end());
    std::stable_sort(out.checks.begin(), out.checks.end(),
                     [](const WaldCheck& x, const WaldCheck& y) { return x.step < y.step; });
    return out;
  };

  // A starts; E intercepts and opens its own exchange with B claiming A's position.
  Advance ra = advance(SkaSession::initiator({who.a}, a, m_bits), std::nullopt, std::nullopt,
                       alpha, env);
  t.sent("A", "E", *ra.outgoing);
  Advance rea = advance(std::move(e_as_a), std::nullopt, std::nullopt, alpha, env);
  t.sent("E(as A)", "B", *rea.outgoing);

  Advance rb = advance(SkaSession::responder({who.b}, b, m_bits), rea.outgoing,
                       observe_link(link, e, b, claimed_position(*rea.outgoing), rng), alpha, env);
  t.checked("B", rb.session);
  if (rb.session.step == Step::Aborted) {
    return finish(3, ra.session, rb.session);
  }
  t.sent("B", "E", *rb.outgoing);

  Advance reb = advance(std::move(e_as_b), ra.outgoing, std::nullopt, alpha, env);
  t.sent("E(as B)", "A", *reb.outgoing);
  ra = advance(std::move(ra.session), reb.outgoing,
               observe_link(link, e, a, claimed_position(*reb.outgoing), rng), alpha, env);
  t.checked("A", ra.session);
  if (ra.session.step == Step::Aborted) {
    return finish(5, ra.session, rb.session);
  }
  t.sent("A", "E", *ra.outgoing);
  reb = advance(std::move(reb.session), ra.outgoing, std::nullopt, alpha, env);

  rea = advance(std::move(rea.session), rb.outgoing, std::nullopt, alpha, env);
  t.sent("E(as A)", "B", *rea.outgoing);
  rb = advance(std::move(rb.session), rea.outgoing,
               observe_link(link, e, b, claimed_position(*rea.outgoing), rng), alpha, env);
  t.checked("B", rb.session);
  if (rb.session.step == Step::Aborted) {
    return finish(7, ra.session, rb.session);
  }
  finish(0, ra.session, rb.session);
  out.attack_succeeds = rb.session.step == Step::Completed;
  t.line(out.attack_succeeds ? "attack succeeds: E shares keys with A and B"
                             : "attack fails");
  return out;
}

// ---------------------------------------------------------------------------

VulnerableRegion make_region(const ReceiverPose& a, const ReceiverPose& b, const LinkModel& link,
                             double alpha) {
  VulnerableRegion r;
  r.pos_a = a.gps;
  r.pos_b = b.gps;
  r.half_width_a = alpha * std::sqrt(link.nominal_crb(auth::claimed_aoa(b.gps, a)));
  r.half_width_b = alpha * std::sqrt(link.nominal_crb(auth::claimed_aoa(a.gps, b)));
  return r;
}

bool in_vulnerable_region(const GeoCoord& p, const VulnerableRegion& region) {
  if (region.pos_a == region.pos_b) {
    throw DegenerateGeometry("vulnerable region endpoints coincide");
  }
  if (p == region.pos_a || p == region.pos_b) {
    return true;
  }
  const auto within = [&](const GeoCoord& at, const GeoCoord& other, double half_width) {
    const double off = geometry::wrap_angle(geometry::heading_angle(at, p) -
                                            geometry::heading_angle(at, other));
    return std::abs(off) <= half_width;
  };
  return within(region.pos_a, region.pos_b, region.half_width_a) &&
         within(region.pos_b, region.pos_a, region.half_width_b);
}

}  // namespace phyauth::ska
