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

#include "iotledger/digest.hpp"

#include <openssl/sha.h>

#include <bit>
#include <stdexcept>

namespace iotledger {

Digest sha256(std::span<const std::uint8_t> bytes) {
  Digest out;
  SHA256(bytes.data(), bytes.size(), out.data());
  return out;
}

Signature sha512(std::span<const std::uint8_t> bytes) {
  Signature out;
  SHA512(bytes.data(), bytes.size(), out.data());
  return out;
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(bytes.size() * 2, '0');
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    out[2 * i] = kDigits[bytes[i] >> 4];
    out[2 * i + 1] = kDigits[bytes[i] & 0x0f];
  }
  return out;
}

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::vector<std::uint8_t> from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) {
    throw std::invalid_argument("hex string has odd length");
  }
  std::vector<std::uint8_t> out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int hi = hex_value(hex[2 * i]);
    const int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) {
      throw std::invalid_argument("invalid hex character");
    }
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

Digest digest_from_hex(std::string_view hex) {
  if (hex.size() != 64) {
    throw std::invalid_argument("digest must be 64 hex characters");
  }
  const auto raw = from_hex(hex);
  Digest d;
  std::copy(raw.begin(), raw.end(), d.begin());
  return d;
}

void CanonicalEncoder::put_u32(std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    buffer_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
}

CanonicalEncoder& CanonicalEncoder::bytes(std::span<const std::uint8_t> field) {
  put_u32(static_cast<std::uint32_t>(field.size()));
  buffer_.insert(buffer_.end(), field.begin(), field.end());
  return *this;
}

CanonicalEncoder& CanonicalEncoder::text(std::string_view field) {
  return bytes(std::span<const std::uint8_t>(
      reinterpret_cast<const std::uint8_t*>(field.data()), field.size()));
}

CanonicalEncoder& CanonicalEncoder::u64(std::uint64_t value) {
  put_u32(8);
  for (int i = 0; i < 8; ++i) {
    buffer_.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
  }
  return *this;
}

CanonicalEncoder& CanonicalEncoder::f64(double value) {
  return u64(std::bit_cast<std::uint64_t>(value));
}

CanonicalEncoder& CanonicalEncoder::empty() {
  put_u32(0);
  return *this;
}

}  // namespace iotledger
