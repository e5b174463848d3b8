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

#include "phyauth/crypto.hpp"
#include "phyauth/errors.hpp"
#include "phyauth/random.hpp"
#include "phyauth/wire.hpp"

namespace phyauth {
namespace {

using wire::Bytes;

TEST(Wire, BigEndianLayout) {
  wire::Writer w;
  w.u8(0xAB);
  w.u16(0x0102);
  w.u32(0x03040506);
  w.u64(0x0708090A0B0C0D0EULL);
  w.f64(1.0);
  const Bytes expect = {0xAB, 0x01, 0x02, 0x03, 0x04, 0x05, 0x06, 0x07, 0x08, 0x09, 0x0A,
                        0x0B, 0x0C, 0x0D, 0x0E, 0x3F, 0xF0, 0, 0, 0, 0, 0, 0};
  EXPECT_EQ(w.bytes(), expect);

  wire::Reader r(w.bytes());
  EXPECT_EQ(r.u8(), 0xAB);
  EXPECT_EQ(r.u16(), 0x0102);
  EXPECT_EQ(r.u32(), 0x03040506U);
  EXPECT_EQ(r.u64(), 0x0708090A0B0C0D0EULL);
  EXPECT_EQ(r.f64(), 1.0);
  EXPECT_TRUE(r.done());
  EXPECT_NO_THROW(r.expect_done());
}

TEST(Wire, FieldPrefixAndRoundTrip) {
  wire::Writer w;
  w.field(wire::to_bytes("hey"));
  w.field({});
  EXPECT_EQ(w.bytes(), (Bytes{0, 0, 0, 3, 'h', 'e', 'y', 0, 0, 0, 0}));
  wire::Reader r(w.bytes());
  EXPECT_EQ(r.field(), wire::to_bytes("hey"));
  EXPECT_TRUE(r.field().empty());
  EXPECT_TRUE(r.done());
}

TEST(Wire, TruncationThrows) {
  const Bytes short_field = {0, 0, 0, 5, 'a', 'b'};
  wire::Reader r(short_field);
  EXPECT_THROW(r.field(), ParseError);
  const Bytes two = {1, 2};
  wire::Reader r2(two);
  EXPECT_THROW(r2.u32(), ParseError);
  wire::Reader r3(two);
  r3.u8();
  EXPECT_THROW(r3.expect_done(), ParseError);
}

TEST(Crypto, Sha256KnownVector) {
  EXPECT_EQ(crypto::to_hex(crypto::sha256(wire::to_bytes("abc"))),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(crypto::to_hex(crypto::sha256({})),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Crypto, Ed25519SignVerifyAndTamper) {
  const crypto::Ed25519Signatures ed;
  RandomSource rng(11);
  const auto kp = ed.generate(rng);
  EXPECT_EQ(kp.public_key.size(), 32U);
  const Bytes msg = wire::to_bytes("position update");
  Bytes sig = ed.sign(kp.secret_key, msg);
  EXPECT_TRUE(ed.verify(kp.public_key, msg, sig));
  Bytes bad_msg = msg;
  bad_msg[0] ^= 1;
  EXPECT_FALSE(ed.verify(kp.public_key, bad_msg, sig));
  sig[5] ^= 0x40;
  EXPECT_FALSE(ed.verify(kp.public_key, msg, sig));
  EXPECT_FALSE(ed.verify(kp.public_key, msg, Bytes(3, 0)));

  RandomSource again(11);
  EXPECT_EQ(ed.generate(again).public_key, kp.public_key);
}

TEST(Crypto, PermissiveAcceptsAnything) {
  const crypto::PermissiveSignatures p;
  EXPECT_TRUE(p.verify(Bytes{}, Bytes{1}, Bytes{2}));
}

TEST(Crypto, SealedBoxRoundTripAndWrongKey) {
  const crypto::Ed25519Signatures ed;
  const crypto::SealedBoxCipher box;
  RandomSource rng(12);
  const auto a = ed.generate(rng);
  const auto b = ed.generate(rng);
  const Bytes pt = wire::to_bytes("session key material");
  const Bytes ct = box.seal(a.public_key, pt);
  EXPECT_NE(ct, pt);
  const auto opened = box.open(a.public_key, a.secret_key, ct);
  ASSERT_TRUE(opened.has_value());
  EXPECT_EQ(*opened, pt);
  EXPECT_FALSE(box.open(b.public_key, b.secret_key, ct).has_value());
  Bytes tampered = ct;
  tampered.back() ^= 1;
  EXPECT_FALSE(box.open(a.public_key, a.secret_key, tampered).has_value());
}

TEST(Crypto, NullCipherIsIdentity) {
  const crypto::NullCipher c;
  const Bytes pt = {9, 8, 7};
  EXPECT_EQ(c.seal({}, pt), pt);
  EXPECT_EQ(*c.open({}, {}, pt), pt);
}

}  // namespace
}  // namespace phyauth
