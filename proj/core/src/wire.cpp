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

#include "phyauth/wire.hpp"

#include <bit>
#include <limits>
#include <string>

#include "phyauth/errors.hpp"

namespace phyauth::wire {

Bytes to_bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

void Writer::u8(std::uint8_t v) { out_.push_back(v); }

void Writer::u16(std::uint16_t v) {
  out_.push_back(static_cast<std::uint8_t>(v >> 8));
  out_.push_back(static_cast<std::uint8_t>(v));
}

void Writer::u32(std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out_.push_back(static_cast<std::uint8_t>(v >> shift));
}

void Writer::u64(std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) out_.push_back(static_cast<std::uint8_t>(v >> shift));
}

void Writer::f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

void Writer::raw(std::span<const std::uint8_t> bytes) {
  out_.insert(out_.end(), bytes.begin(), bytes.end());
}

void Writer::field(std::span<const std::uint8_t> bytes) {
  if (bytes.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw ParseError("field too long for a 32-bit length prefix");
  }
  u32(static_cast<std::uint32_t>(bytes.size()));
  raw(bytes);
}

std::span<const std::uint8_t> Reader::take(std::size_t count) {
  if (count > remaining()) {
    throw ParseError("truncated input: need " + std::to_string(count) + " bytes, have " +
                     std::to_string(remaining()));
  }
  auto out = in_.subspan(pos_, count);
  pos_ += count;
  return out;
}

std::uint8_t Reader::u8() { return take(1)[0]; }

std::uint16_t Reader::u16() {
  auto b = take(2);
  return static_cast<std::uint16_t>((b[0] << 8) | b[1]);
}

std::uint32_t Reader::u32() {
  auto b = take(4);
  std::uint32_t v = 0;
  for (auto byte : b) v = (v << 8) | byte;
  return v;
}

std::uint64_t Reader::u64() {
  auto b = take(8);
  std::uint64_t v = 0;
  for (auto byte : b) v = (v << 8) | byte;
  return v;
}

double Reader::f64() { return std::bit_cast<double>(u64()); }

Bytes Reader::raw(std::size_t count) {
  auto b = take(count);
  return Bytes(b.begin(), b.end());
}

Bytes Reader::field() { return raw(u32()); }

void Reader::expect_done() const {
  if (!done()) {
    throw ParseError(std::to_string(remaining()) + " trailing bytes");
  }
}

}  // namespace phyauth::wire
