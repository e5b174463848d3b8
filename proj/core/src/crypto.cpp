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

#include "phyauth/crypto.hpp"

#include <array>
#include <stdexcept>

#include <sodium.h>

#include "phyauth/errors.hpp"

namespace phyauth::crypto {

namespace {

void ensure_sodium() {
  static const int status = sodium_init();
  if (status < 0) {
    throw std::runtime_error("libsodium failed to initialise");
  }
}

}  // namespace

KeyPair Ed25519Signatures::generate(RandomSource& rng) const {
  ensure_sodium();
  std::array<std::uint8_t, crypto_sign_SEEDBYTES> seed{};
  rng.fill(seed);
  KeyPair kp{Bytes(crypto_sign_PUBLICKEYBYTES), Bytes(crypto_sign_SECRETKEYBYTES)};
  crypto_sign_seed_keypair(kp.public_key.data(), kp.secret_key.data(), seed.data());
  sodium_memzero(seed.data(), seed.size());
  return kp;
}

Bytes Ed25519Signatures::sign(ByteView secret_key, ByteView message) const {
  ensure_sodium();
  if (secret_key.size() != crypto_sign_SECRETKEYBYTES) {
    throw std::invalid_argument("ed25519 secret key has the wrong length");
  }
  Bytes sig(crypto_sign_BYTES);
  crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(), secret_key.data());
  return sig;
}

bool Ed25519Signatures::verify(ByteView public_key, ByteView message, ByteView signature) const {
  ensure_sodium();
  if (public_key.size() != crypto_sign_PUBLICKEYBYTES || signature.size() != crypto_sign_BYTES) {
    return false;
  }
  return crypto_sign_verify_detached(signature.data(), message.data(), message.size(),
                                     public_key.data()) == 0;
}

Bytes SealedBoxCipher::seal(ByteView recipient_public_key, ByteView plaintext) const {
  ensure_sodium();
  if (recipient_public_key.size() != crypto_sign_PUBLICKEYBYTES) {
    throw std::invalid_argument("recipient key is not an ed25519 public key");
  }
  std::array<std::uint8_t, crypto_box_PUBLICKEYBYTES> x_pk{};
  if (crypto_sign_ed25519_pk_to_curve25519(x_pk.data(), recipient_public_key.data()) != 0) {
    throw std::invalid_argument("recipient key cannot be converted to X25519");
  }
  Bytes out(plaintext.size() + crypto_box_SEALBYTES);
  crypto_box_seal(out.data(), plaintext.data(), plaintext.size(), x_pk.data());
  return out;
}

std::optional<Bytes> SealedBoxCipher::open(ByteView public_key, ByteView secret_key,
                                           ByteView ciphertext) const {
  ensure_sodium();
  if (public_key.size() != crypto_sign_PUBLICKEYBYTES ||
      secret_key.size() != crypto_sign_SECRETKEYBYTES || ciphertext.size() < crypto_box_SEALBYTES) {
    return std::nullopt;
  }
  std::array<std::uint8_t, crypto_box_PUBLICKEYBYTES> x_pk{};
  std::array<std::uint8_t, crypto_box_SECRETKEYBYTES> x_sk{};
  if (crypto_sign_ed25519_pk_to_curve25519(x_pk.data(), public_key.data()) != 0) {
    return std::nullopt;
  }
  crypto_sign_ed25519_sk_to_curve25519(x_sk.data(), secret_key.data());
  Bytes out(ciphertext.size() - crypto_box_SEALBYTES);
  const int rc =
      crypto_box_seal_open(out.data(), ciphertext.data(), ciphertext.size(), x_pk.data(), x_sk.data());
  sodium_memzero(x_sk.data(), x_sk.size());
  if (rc != 0) return std::nullopt;
  return out;
}

Bytes sha256(ByteView data) {
  ensure_sodium();
  Bytes out(crypto_hash_sha256_BYTES);
  crypto_hash_sha256(out.data(), data.data(), data.size());
  return out;
}

std::string to_hex(ByteView data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (auto b : data) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

}  // namespace phyauth::crypto
