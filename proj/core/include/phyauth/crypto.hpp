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

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "phyauth/random.hpp"
#include "phyauth/wire.hpp"

namespace phyauth::crypto {

using wire::Bytes;
using ByteView = std::span<const std::uint8_t>;

struct KeyPair {
  Bytes public_key;
  Bytes secret_key;
};

/// Pluggable signature scheme used for certificates and message signatures.
class SignatureScheme {
 public:
  virtual ~SignatureScheme() = default;
  virtual std::string_view name() const = 0;
  /// Deterministic in the state of `rng`.
  virtual KeyPair generate(RandomSource& rng) const = 0;
  virtual Bytes sign(ByteView secret_key, ByteView message) const = 0;
  virtual bool verify(ByteView public_key, ByteView message, ByteView signature) const = 0;
};

/// Ed25519 (libsodium).
class Ed25519Signatures final : public SignatureScheme {
 public:
  std::string_view name() const override { return "ed25519"; }
  KeyPair generate(RandomSource& rng) const override;
  Bytes sign(ByteView secret_key, ByteView message) const override;
  bool verify(ByteView public_key, ByteView message, ByteView signature) const override;
};

/// Signs with Ed25519 but accepts every signature on verification. Models a
/// receiver facing credentials that were stolen wholesale, so that forged
/// messages clear the PKI stage.
class PermissiveSignatures final : public SignatureScheme {
 public:
  std::string_view name() const override { return "permissive"; }
  KeyPair generate(RandomSource& rng) const override { return inner_.generate(rng); }
  Bytes sign(ByteView secret_key, ByteView message) const override {
    return inner_.sign(secret_key, message);
  }
  bool verify(ByteView, ByteView, ByteView) const override { return true; }

 private:
  Ed25519Signatures inner_;
};

/// Public-key encryption of short payloads to a recipient's signing key.
class PublicKeyCipher {
 public:
  virtual ~PublicKeyCipher() = default;
  virtual std::string_view name() const = 0;
  virtual Bytes seal(ByteView recipient_public_key, ByteView plaintext) const = 0;
  /// std::nullopt when the ciphertext does not open under the given keys.
  virtual std::optional<Bytes> open(ByteView public_key, ByteView secret_key,
                                    ByteView ciphertext) const = 0;
};

/// libsodium sealed boxes; Ed25519 keys are converted to X25519.
class SealedBoxCipher final : public PublicKeyCipher {
 public:
  std::string_view name() const override { return "sealed-box"; }
  Bytes seal(ByteView recipient_public_key, ByteView plaintext) const override;
  std::optional<Bytes> open(ByteView public_key, ByteView secret_key,
                            ByteView ciphertext) const override;
};

/// Identity transform, for deterministic protocol traces.
class NullCipher final : public PublicKeyCipher {
 public:
  std::string_view name() const override { return "null"; }
  Bytes seal(ByteView, ByteView plaintext) const override {
    return Bytes(plaintext.begin(), plaintext.end());
  }
  std::optional<Bytes> open(ByteView, ByteView, ByteView ciphertext) const override {
    return Bytes(ciphertext.begin(), ciphertext.end());
  }
};

Bytes sha256(ByteView data);

std::string to_hex(ByteView data);

}  // namespace phyauth::crypto
