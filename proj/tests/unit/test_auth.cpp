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
#include <limits>

#include "phyauth/auth.hpp"
#include "phyauth/errors.hpp"
#include "phyauth/stats.hpp"

namespace phyauth::auth {
namespace {

const GeoCoord kRx{deg2rad(-83.0), deg2rad(40.0)};

struct Pki {
  crypto::Ed25519Signatures scheme;
  RandomSource rng{21};
  CertificateAuthority ca{scheme, rng};
  Credentials alice = ca.issue(wire::to_bytes("alice"), rng);
  Credentials mallory = ca.issue(wire::to_bytes("mallory"), rng);
};

SignedMessage beacon_message(const Credentials& c, const crypto::SignatureScheme& s,
                             const GeoCoord& gps, std::uint64_t t) {
  return sign_message(c, s, encode_beacon(Beacon{gps, 12.5, wire::to_bytes("hello")}), t);
}

TEST(Pki, HonestMessageVerifies) {
  Pki p;
  const SignedMessage m = beacon_message(p.alice, p.scheme, kRx, 1000);
  EXPECT_TRUE(pki_verify(m, p.ca.public_key(), p.scheme, 1000));
  EXPECT_TRUE(pki_verify(m, p.ca.public_key(), p.scheme, 1000 + kDefaultFreshnessMs));
}

TEST(Pki, StaleOrFutureTimestampFails) {
  Pki p;
  const SignedMessage m = beacon_message(p.alice, p.scheme, kRx, 10000);
  EXPECT_FALSE(pki_verify(m, p.ca.public_key(), p.scheme, 10000 + kDefaultFreshnessMs + 1));
  EXPECT_FALSE(pki_verify(m, p.ca.public_key(), p.scheme, 10000 - kDefaultFreshnessMs - 1));
}

TEST(Pki, TamperedPayloadOrBorrowedIdentityFails) {
  Pki p;
  SignedMessage m = beacon_message(p.alice, p.scheme, kRx, 0);
  m.payload.back() ^= 1;
  EXPECT_FALSE(pki_verify(m, p.ca.public_key(), p.scheme, 0));

  // Mallory's certificate does not bind her key to Alice's ID.
  SignedMessage spoof = beacon_message(p.mallory, p.scheme, kRx, 0);
  spoof.id = p.alice.identity.id;
  EXPECT_FALSE(pki_verify(spoof, p.ca.public_key(), p.scheme, 0));
}

TEST(Pki, PermissiveSchemeAcceptsForgery) {
  Pki p;
  const crypto::PermissiveSignatures lax;
  SignedMessage spoof = beacon_message(p.mallory, p.scheme, kRx, 0);
  spoof.id = p.alice.identity.id;
  EXPECT_TRUE(pki_verify(spoof, p.ca.public_key(), lax, 0));
  spoof.certificate = {1, 2};
  EXPECT_THROW(pki_verify(spoof, p.ca.public_key(), lax, 0), ParseError);
}

TEST(Messages, SerializationRoundTrip) {
  Pki p;
  const SignedMessage m = beacon_message(p.alice, p.scheme, kRx, 0x0102030405ULL);
  const SignedMessage back = parse_message(serialize(m));
  EXPECT_EQ(back.id, m.id);
  EXPECT_EQ(back.payload, m.payload);
  EXPECT_EQ(back.signature, m.signature);
  EXPECT_EQ(back.timestamp_ms, m.timestamp_ms);
  EXPECT_EQ(back.certificate, m.certificate);
  Bytes cut = serialize(m);
  cut.pop_back();
  EXPECT_THROW(parse_message(cut), ParseError);

  const Beacon b = decode_beacon(m.payload);
  EXPECT_EQ(b.gps.lon, kRx.lon);
  EXPECT_EQ(b.gps.lat, kRx.lat);
  EXPECT_EQ(b.speed, 12.5);
  EXPECT_EQ(b.body, wire::to_bytes("hello"));
  EXPECT_THROW(decode_beacon(Bytes(kBeaconHeaderBytes - 1, 0)), MalformedBeacon);
}

TEST(Wald, ExamplesBoundaryAndSymmetry) {
  const WaldOutcome in = wald_test(0.11, 0.10, 1e-4, 2.0);
  EXPECT_NEAR(in.statistic, 1.0, 1e-12);
  EXPECT_EQ(in.decision, Hypothesis::H1);
  EXPECT_EQ(wald_test(0.13, 0.10, 1e-4, 2.0).decision, Hypothesis::H0);
  // Exactly on the threshold accepts.
  EXPECT_EQ(wald_test(0.5, 0.0, 0.0625, 2.0).decision, Hypothesis::H1);
  EXPECT_NEAR(wald_test(0.3, 0.1, 1e-3, 3.0).statistic, wald_test(-0.1, 0.1, 1e-3, 3.0).statistic,
              1e-12);
}

TEST(Probabilities, DetectionMatchesNormalAndMonteCarlo) {
  const double crb = 1e-4;
  EXPECT_NEAR(detection_probability(3.0, 0.2, crb), 0.9973, 1e-4);
  RandomSource rng(22);
  const int n = 100000;
  int hits = 0;
  int drawn = 0;
  while (drawn < n) {
    const double t = 1.4 + std::sqrt(0.01) * rng.normal();
    if (std::abs(t) > kPi / 2) continue;  // truncated to the array support
    ++drawn;
    if (std::abs(t - 1.4) <= 1.5 * 0.1) ++hits;
  }
  EXPECT_NEAR(detection_probability(1.5, 1.4, 0.01), static_cast<double>(hits) / n, 0.002);
}

TEST(Probabilities, DetectionMonotoneInAlpha) {
  double prev = 0.0;
  for (double a = 0.5; a <= 5.0; a += 0.5) {
    const double pd = detection_probability(a, 0.3, 1e-3);
    EXPECT_GT(pd, prev);
    prev = pd;
  }
}

TEST(Probabilities, DetectionScaleFreeAwayFromTheEdges) {
  // Far from +-pi/2 the truncation is negligible and P_D = 2 Phi(alpha) - 1.
  for (double crb : {1e-6, 1e-4, 1e-3}) {
    EXPECT_NEAR(detection_probability(2.0, 0.3, crb), 2.0 * stats::normal_cdf(2.0) - 1.0, 1e-12);
  }
  // Near the edge the truncated mass concentrates inside the window.
  EXPECT_GT(detection_probability(2.0, 1.5, 1e-2), detection_probability(2.0, 0.3, 1e-2));
}

TEST(Probabilities, FalseAlarmExamples) {
  EXPECT_LT(false_alarm_probability(3.0, deg2rad(-35.0), deg2rad(-25.0), 1e-5), 1e-12);
  EXPECT_NEAR(false_alarm_probability(2.0, 0.3, 0.3, 1e-3), detection_probability(2.0, 0.3, 1e-3),
              1e-15);
  // One sigma offset with alpha = 1: P(|Z - 1| <= 1) = Phi(0) - Phi(-2).
  EXPECT_NEAR(false_alarm_probability(1.0, 0.01, 0.0, 1e-4),
              stats::normal_cdf(0.0) - stats::normal_cdf(-2.0), 1e-9);
  // Test CRB differing from the spread CRB narrows the window.
  EXPECT_LT(false_alarm_probability(2.0, 0.02, 0.0, 1e-4, 5e-5),
            false_alarm_probability(2.0, 0.02, 0.0, 1e-4, 1e-4));
}

TEST(ClaimedAoa, FoldsExpectedAngle) {
  const ReceiverPose pose{kRx, deg2rad(10.0)};
  for (double bearing : {0.0, 45.0, 100.0, 200.0, 300.0}) {
    const GeoCoord tx = geometry::destination(kRx, deg2rad(bearing), 150.0);
    const double expect = geometry::fold_to_visible(
        geometry::expected_aoa(geometry::heading_angle(tx, kRx), pose.theta_r_north));
    EXPECT_NEAR(claimed_aoa(tx, pose), expect, 1e-15);
    EXPECT_LE(std::abs(claimed_aoa(tx, pose)), kPi / 2);
  }
}

class AuthenticateTest : public ::testing::Test {
 protected:
  Pki p;
  ReceiverPose pose{kRx, deg2rad(-20.0)};
  estimation::AoaEstimator est{estimation::ReceiverModel{{4, 0.5}, 100.0, 0.01}};
  AuthContext ctx;
  AoaRecordSet table;

  void SetUp() override {
    ctx.scheme = &p.scheme;
    ctx.ca_public_key = p.ca.public_key();
    ctx.now_ms = 500;
    ctx.estimator = &est;
  }

  channel::PilotObservation observe_from(const GeoCoord& tx, std::uint64_t seed) {
    RandomSource rng(seed);
    channel::RicianParams params;
    params.k = 100.0;
    params.theta = claimed_aoa(tx, pose);
    const auto frame = channel::default_pilots(params.tx, 1, 10, 1.0, rng);
    return channel::transmit(frame, params, 0.01, rng, channel::Fading::PerPilot);
  }
};

TEST_F(AuthenticateTest, HonestSenderAccepted) {
  const GeoCoord tx = geometry::destination(kRx, deg2rad(30.0), 100.0);
  const SignedMessage m = beacon_message(p.alice, p.scheme, tx, 500);
  const AuthVerdict v = authenticate(m, observe_from(tx, 1), table, 3.0, pose, ctx);
  EXPECT_TRUE(v.pki_ok);
  EXPECT_EQ(v.decision, Decision::Accept);
  EXPECT_EQ(v.theta_b, claimed_aoa(tx, pose));
  ASSERT_EQ(table.size(), 1U);
  const AoaRecord* row = table.find(p.alice.identity.id);
  ASSERT_NE(row, nullptr);
  EXPECT_EQ(row->theta_b, v.theta_b);
  EXPECT_EQ(row->theta_hat, v.theta_hat);
  EXPECT_EQ(row->updated_at_ms, 500U);
}

TEST_F(AuthenticateTest, SpoofedPositionRejected) {
  const GeoCoord real = geometry::destination(kRx, deg2rad(30.0), 100.0);
  const GeoCoord fake = geometry::destination(kRx, deg2rad(60.0), 100.0);
  const SignedMessage m = beacon_message(p.alice, p.scheme, fake, 500);
  const AuthVerdict v = authenticate(m, observe_from(real, 2), table, 3.0, pose, ctx);
  EXPECT_TRUE(v.pki_ok);
  EXPECT_EQ(v.decision, Decision::RejectAoa);
  EXPECT_GT(v.wald_statistic, 3.0);
}

TEST_F(AuthenticateTest, PkiFailureLeavesTableUntouched) {
  const GeoCoord tx = geometry::destination(kRx, deg2rad(30.0), 100.0);
  SignedMessage m = beacon_message(p.alice, p.scheme, tx, 500);
  m.timestamp_ms = 500 + 2 * kDefaultFreshnessMs;
  const AuthVerdict v = authenticate(m, observe_from(tx, 3), table, 3.0, pose, ctx);
  EXPECT_FALSE(v.pki_ok);
  EXPECT_EQ(v.decision, Decision::RejectPki);
  EXPECT_EQ(table.size(), 0U);
}

TEST_F(AuthenticateTest, SignedPayloadWithoutBeaconThrows) {
  const SignedMessage m = sign_message(p.alice, p.scheme, Bytes{1, 2, 3}, 500);
  const GeoCoord tx = geometry::destination(kRx, deg2rad(30.0), 100.0);
  EXPECT_THROW(authenticate(m, observe_from(tx, 4), table, 3.0, pose, ctx), MalformedBeacon);
}

}  // namespace
}  // namespace phyauth::auth
