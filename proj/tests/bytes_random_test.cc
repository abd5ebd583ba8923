/*
 * Copyright 2026 The JingBing Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <set>

#include <gtest/gtest.h>

#include "jingbing/bytes.h"
#include "jingbing/random.h"
#include "test_util.h"

namespace jingbing {
namespace {

TEST(Hex, RoundTrip) {
  const Bytes b = {0x00, 0x01, 0xab, 0xff};
  EXPECT_EQ(HexEncode(b), "0001abff");
  EXPECT_EQ(HexDecode("0001abff"), b);
  EXPECT_EQ(HexDecode("0001ABFF"), b);
  EXPECT_ANY_THROW(HexDecode("abc"));
  EXPECT_ANY_THROW(HexDecode("zz"));
}

TEST(Sha256, KnownAnswer) {
  EXPECT_EQ(HexEncode(Sha256(ToBytes("abc"))),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(ByteCodec, BigEndianIntegers) {
  ByteWriter w;
  w.PutU8(1);
  w.PutU16(0x0203);
  w.PutU32(0x04050607);
  w.PutU64(0x08090a0b0c0d0e0fULL);
  w.PutBool(true);
  w.PutLengthPrefixed(ToBytes("AB"));
  EXPECT_EQ(HexEncode(w.bytes()),
            "0102030405060708090a0b0c0d0e0f01" "000000024142");
  ByteReader r(w.bytes());
  EXPECT_EQ(r.GetU8(), 1);
  EXPECT_EQ(r.GetU16(), 0x0203);
  EXPECT_EQ(r.GetU32(), 0x04050607u);
  EXPECT_EQ(r.GetU64(), 0x08090a0b0c0d0e0fULL);
  EXPECT_TRUE(r.GetBool());
  EXPECT_EQ(r.GetLengthPrefixed(), ToBytes("AB"));
  EXPECT_NO_THROW(r.Finish());
}

TEST(ByteCodec, ReaderErrors) {
  const Bytes two = {0, 1};
  ByteReader r(two);
  EXPECT_ERROR_CODE(r.GetU32(), ErrorCode::kMalformedMessage);
  ByteReader trailing(two);
  trailing.GetU8();
  EXPECT_ERROR_CODE(trailing.Finish(), ErrorCode::kMalformedMessage);
  const Bytes flag = {2};
  ByteReader bad_bool(flag);
  EXPECT_ERROR_CODE(bad_bool.GetBool(), ErrorCode::kMalformedMessage);
  const Bytes huge_len = {0xff, 0xff, 0xff, 0xff, 0};
  ByteReader lp(huge_len);
  EXPECT_ERROR_CODE(lp.GetLengthPrefixed(), ErrorCode::kMalformedMessage);
  ByteReader count(huge_len);
  EXPECT_ERROR_CODE(count.GetCount(1), ErrorCode::kMalformedMessage);
}

TEST(SeededRandom, DeterministicPerSeed) {
  SeededRandom a(42), b(42), c(43);
  const uint64_t x = a.NextU64();
  EXPECT_EQ(x, b.NextU64());
  EXPECT_NE(x, c.NextU64());
}

TEST(RandomSource, UniformStaysInRange) {
  SeededRandom rng(1);
  std::set<uint64_t> seen;
  for (int i = 0; i < 10000; ++i) {
    uint64_t v = rng.Uniform(10);
    ASSERT_LT(v, 10u);
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 10u);
  EXPECT_EQ(rng.Uniform(1), 0u);
}

TEST(SystemRandom, ProducesDistinctOutput) {
  SystemRandom rng;
  EXPECT_NE(rng.NextU64(), rng.NextU64());
}

}  // namespace
}  // namespace jingbing
