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
#include <span>
#include <string_view>
#include <vector>

namespace phyauth::wire {

using Bytes = std::vector<std::uint8_t>;

Bytes to_bytes(std::string_view s);

/// Big-endian append-only encoder.
class Writer {
 public:
  void u8(std::uint8_t v);
  void u16(std::uint16_t v);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void f64(double v);  // IEEE-754 bits, big-endian
  void raw(std::span<const std::uint8_t> bytes);
  /// 32-bit big-endian length prefix followed by the bytes.
  void field(std::span<const std::uint8_t> bytes);

  const Bytes& bytes() const& noexcept { return out_; }
  Bytes take() && noexcept { return std::move(out_); }

 private:
  Bytes out_;
};

/// Big-endian decoder over a borrowed buffer; every read past the end throws
/// ParseError.
class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) noexcept : in_(in) {}

  std::uint8_t u8();
  std::uint16_t u16();
  std::uint32_t u32();
  std::uint64_t u64();
  double f64();
  Bytes raw(std::size_t count);
  Bytes field();

  std::size_t remaining() const noexcept { return in_.size() - pos_; }
  bool done() const noexcept { return remaining() == 0; }
  /// Throws ParseError when unread bytes remain.
  void expect_done() const;

 private:
  std::span<const std::uint8_t> take(std::size_t count);

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

}  // namespace phyauth::wire
