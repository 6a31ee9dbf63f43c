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

#include <gtest/gtest.h>

#include <stdexcept>

#include "iotledger/digest.hpp"

namespace iotledger {
namespace {

TEST(Digest, Sha256KnownVector) {
  EXPECT_EQ(to_hex(sha256("abc")),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(to_hex(sha256("")),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Digest, Sha512KnownVector) {
  const std::string abc = "abc";
  const auto sig = sha512(std::span<const std::uint8_t>(
      reinterpret_cast<const std::uint8_t*>(abc.data()), abc.size()));
  EXPECT_EQ(to_hex(sig).substr(0, 32), "ddaf35a193617abacc417349ae204131");
}

TEST(Digest, HexRoundTrip) {
  const Digest d = sha256("round trip");
  EXPECT_EQ(digest_from_hex(to_hex(d)), d);
  EXPECT_EQ(from_hex("00ff10"), (std::vector<std::uint8_t>{0x00, 0xff, 0x10}));
  EXPECT_EQ(from_hex("ABcd"), (std::vector<std::uint8_t>{0xab, 0xcd}));
}

TEST(Digest, HexRejectsMalformed) {
  EXPECT_THROW(from_hex("abc"), std::invalid_argument);
  EXPECT_THROW(from_hex("zz"), std::invalid_argument);
  EXPECT_THROW(digest_from_hex("00ff"), std::invalid_argument);
}

TEST(CanonicalEncoder, LengthPrefixesEveryField) {
  CanonicalEncoder enc;
  enc.text("ab").empty().u64(1);
  const std::vector<std::uint8_t> expected = {
      2, 0, 0, 0, 'a', 'b',           // text
      0, 0, 0, 0,                     // empty
      8, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0};  // u64, little-endian
  EXPECT_EQ(std::vector<std::uint8_t>(enc.view().begin(), enc.view().end()),
            expected);
}

TEST(CanonicalEncoder, FieldBoundariesAreUnambiguous) {
  CanonicalEncoder a;
  a.text("ab").text("c");
  CanonicalEncoder b;
  b.text("a").text("bc");
  EXPECT_NE(sha256(a.view()), sha256(b.view()));
}

TEST(CanonicalEncoder, DoubleUsesBitPattern) {
  CanonicalEncoder enc;
  enc.f64(1.0);
  const std::vector<std::uint8_t> expected = {8, 0, 0, 0, 0, 0, 0, 0,
                                              0, 0, 0xf0, 0x3f};
  EXPECT_EQ(std::vector<std::uint8_t>(enc.view().begin(), enc.view().end()),
            expected);
}

}  // namespace
}  // namespace iotledger
