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

#include "jingbing/commutative_cipher.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "test_util.h"

namespace jingbing::cipher {
namespace {

using ::jingbing::testing::SourceDir;

// Group order l = 2^252 + 27742317777372353535851937790883648493, little-endian.
constexpr std::array<uint8_t, 32> kOrder = {
    0xed, 0xd3, 0xf5, 0x5c, 0x1a, 0x63, 0x12, 0x58, 0xd6, 0x9c, 0xf7,
    0xa2, 0xde, 0xf9, 0xde, 0x14, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00,
    0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x10};

bool LessThanOrder(const std::array<uint8_t, 32>& s) {
  for (int i = 31; i >= 0; --i) {
    if (s[i] != kOrder[i]) return s[i] < kOrder[i];
  }
  return false;
}

TEST(ExpandMessageXmd, MatchesRfc9380Vectors) {
  const std::string dst = "QUUX-V01-CS02-with-expander-SHA512-256";
  EXPECT_EQ(HexEncode(ExpandMessageXmdSha512(ToBytes(""), ToBytes(dst), 32)),
            "6b9a7312411d92f921c6f68ca0b6380730a1a4d982c507211a90964c394179ba");
  EXPECT_EQ(HexEncode(ExpandMessageXmdSha512(ToBytes("abc"), ToBytes(dst), 32)),
            "0da749f12fbe5483eb066a5f595055679b976e93abe9be6f0f6318bce7aca8dc");
}

TEST(HashToGroup, MatchesGoldenVectors) {
  std::ifstream in(SourceDir() + "/tests/golden/hash_to_group.txt");
  ASSERT_TRUE(in) << "golden file missing";
  std::string line;
  int checked = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string id_hex, element_hex;
    fields >> id_hex >> element_hex;
    EXPECT_EQ(HexEncode(HashToGroup(HexDecode(id_hex)).bytes()), element_hex)
        << "id " << id_hex;
    ++checked;
  }
  EXPECT_GE(checked, 10);
}

TEST(HashToGroup, DeterministicAndDistinct) {
  EXPECT_EQ(HashToGroup(ToBytes("alice")), HashToGroup(ToBytes("alice")));
  EXPECT_NE(HashToGroup(ToBytes("alice")), HashToGroup(ToBytes("bob")));
}

TEST(HashToGroup, RejectsEmptyAndOversizedIdentifiers) {
  EXPECT_ERROR_CODE(HashToGroup(Bytes{}), ErrorCode::kInvalidIdentifier);
  EXPECT_ERROR_CODE(HashToGroup(Bytes(129, 'a')), ErrorCode::kInvalidIdentifier);
  EXPECT_NO_THROW(HashToGroup(Bytes(128, 'a')));
}

TEST(HashToGroup, InjectiveOnTenThousandIdentifiers) {
  std::set<GroupElement> seen;
  for (int i = 0; i < 10000; ++i) {
    seen.insert(HashToGroup(ToBytes("voter-" + std::to_string(i))));
  }
  EXPECT_EQ(seen.size(), 10000u);
}

TEST(Keygen, ScalarsNonZeroReducedAndDistinct) {
  SeededRandom rng(1);
  std::set<std::array<uint8_t, 32>> seen;
  const std::array<uint8_t, 32> zero{};
  for (int i = 0; i < 1000; ++i) {
    auto k = Keygen(rng);
    EXPECT_NE(k.bytes(), zero);
    EXPECT_TRUE(LessThanOrder(k.bytes()));
    seen.insert(k.bytes());
  }
  EXPECT_EQ(seen.size(), 1000u);
}

TEST(GroupScalar, FromBytesRejectsZeroAndUnreduced) {
  EXPECT_ERROR_CODE(GroupScalar::FromBytes(Bytes(32, 0)),
                    ErrorCode::kInvalidArgument);
  EXPECT_ERROR_CODE(GroupScalar::FromBytes(kOrder), ErrorCode::kInvalidArgument);
  EXPECT_ERROR_CODE(GroupScalar::FromBytes(Bytes(31, 1)),
                    ErrorCode::kInvalidArgument);
}

TEST(Encrypt, IdentityExponentIsHashToGroup) {
  const auto one = GroupScalar::FromUint64(1);
  EXPECT_EQ(Encrypt(one, ToBytes("alice")), HashToGroup(ToBytes("alice")));
  const auto g = HashToGroup(ToBytes("bob"));
  EXPECT_EQ(Reencrypt(one, g), g);
}

TEST(Encrypt, EqualsReencryptOfHash) {
  SeededRandom rng(2);
  const auto k = Keygen(rng);
  EXPECT_EQ(Encrypt(k, ToBytes("carol")),
            Reencrypt(k, HashToGroup(ToBytes("carol"))));
}

TEST(Encrypt, CommutesOverRandomTriples) {
  SeededRandom rng(3);
  for (int i = 0; i < 100; ++i) {
    const auto a = Keygen(rng);
    const auto b = Keygen(rng);
    Bytes x(1 + rng.Uniform(64));
    rng.Fill(x);
    EXPECT_EQ(Reencrypt(b, Encrypt(a, x)), Reencrypt(a, Encrypt(b, x)));
    const auto g = HashToGroup(x);
    EXPECT_EQ(Reencrypt(a, Reencrypt(b, g)), Reencrypt(b, Reencrypt(a, g)));
  }
}

TEST(Reencrypt, RejectsMalformedEncodings) {
  SeededRandom rng(4);
  const auto k = Keygen(rng);
  // All-ones is not a canonical field element.
  EXPECT_ERROR_CODE(Reencrypt(k, Bytes(32, 0xff)),
                    ErrorCode::kInvalidGroupElement);
  // The identity encodes as all zeros and is excluded.
  EXPECT_ERROR_CODE(Reencrypt(k, Bytes(32, 0)), ErrorCode::kInvalidGroupElement);
  EXPECT_ERROR_CODE(Reencrypt(k, Bytes(31, 1)), ErrorCode::kInvalidGroupElement);
  auto good = HashToGroup(ToBytes("dave")).bytes();
  EXPECT_NO_THROW(Reencrypt(k, good));
}

TEST(GroupElement, FromBytesRoundTrips) {
  const auto g = HashToGroup(ToBytes("erin"));
  EXPECT_EQ(GroupElement::FromBytes(g.bytes()), g);
}

TEST(Shuffle, EmptyAndSingleton) {
  SeededRandom rng(5);
  EXPECT_TRUE(Shuffle(std::vector<int>{}, rng).empty());
  EXPECT_EQ(Shuffle(std::vector<int>{7}, rng), std::vector<int>{7});
}

TEST(Shuffle, PreservesMultisetAndChangesOrder) {
  SeededRandom rng(6);
  std::vector<int> in(100);
  for (int i = 0; i < 100; ++i) in[i] = i;
  for (int trial = 0; trial < 20; ++trial) {
    auto out = Shuffle(in, rng);
    EXPECT_NE(out, in);
    std::sort(out.begin(), out.end());
    EXPECT_EQ(out, in);
  }
}

// Each of the 6 permutations of 3 items should appear about 1/6 of the time.
TEST(Shuffle, UniformOverSmallPermutations) {
  SeededRandom rng(7);
  std::map<std::vector<int>, int> counts;
  const int trials = 60000;
  for (int i = 0; i < trials; ++i) ++counts[Shuffle(std::vector<int>{0, 1, 2}, rng)];
  ASSERT_EQ(counts.size(), 6u);
  for (const auto& [perm, count] : counts) {
    EXPECT_NEAR(count, trials / 6, 500);
  }
}

}  // namespace
}  // namespace jingbing::cipher
