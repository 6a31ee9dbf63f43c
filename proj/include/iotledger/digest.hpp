// Copyright 2026 The iotledger Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef IOTLEDGER_DIGEST_HPP_
#define IOTLEDGER_DIGEST_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace iotledger {

using Digest = std::array<std::uint8_t, 32>;
using Signature = std::array<std::uint8_t, 64>;

Digest sha256(std::span<const std::uint8_t> bytes);
Signature sha512(std::span<const std::uint8_t> bytes);

inline Digest sha256(std::string_view text) {
  return sha256(std::span<const std::uint8_t>(
      reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

// Lowercase hex.
std::string to_hex(std::span<const std::uint8_t> bytes);

// Throws std::invalid_argument on odd length or a non-hex character.
std::vector<std::uint8_t> from_hex(std::string_view hex);

// Throws std::invalid_argument unless `hex` encodes exactly 32 bytes.
Digest digest_from_hex(std::string_view hex);

// Length-prefixed field writer used for every hashed structure. Each field is
// encoded as a little-endian u32 byte count followed by the raw bytes, so
// field boundaries are unambiguous.
class CanonicalEncoder {
 public:
  CanonicalEncoder& bytes(std::span<const std::uint8_t> field);
  CanonicalEncoder& text(std::string_view field);
  CanonicalEncoder& u64(std::uint64_t value);
  // IEEE-754 bit pattern, little-endian.
  CanonicalEncoder& f64(double value);
  CanonicalEncoder& empty();

  std::span<const std::uint8_t> view() const { return buffer_; }
  void clear() { buffer_.clear(); }

 private:
  void put_u32(std::uint32_t v);
  std::vector<std::uint8_t> buffer_;
};

struct DigestHash {
  std::size_t operator()(const Digest& d) const noexcept {
    std::size_t h;
    std::memcpy(&h, d.data(), sizeof(h));
    return h;
  }
};

}  // namespace iotledger

#endif  // IOTLEDGER_DIGEST_HPP_
