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

#include "jingbing/bfv.h"

#include <gtest/gtest.h>

#include "test_util.h"

namespace jingbing::bfv {
namespace {

using ::jingbing::testing::RandomPoly;

class BfvTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    SeededRandom rng(4096);
    keys_ = new Keys(Keygen(BfvParams::Default(), rng));
  }
  static void TearDownTestSuite() { delete keys_; }

  static const SecretKey& sk() { return keys_->secret_key; }
  static const PublicKey& pk() { return keys_->public_key; }
  static const RelinKey& rk() { return keys_->relin_key; }

  static Keys* keys_;
};
Keys* BfvTest::keys_ = nullptr;

TEST(BfvParams, DefaultsAreValidAndFitThePaperLimits) {
  const auto p = BfvParams::Default();
  EXPECT_NO_THROW(p.Validate());
  EXPECT_EQ(p.degree, 4096u);
  EXPECT_EQ(p.degree & (p.degree - 1), 0u);
  ASSERT_EQ(p.moduli.size(), 2u);
  for (uint64_t q : p.moduli) {
    EXPECT_TRUE(ring::IsPrime(q));
    EXPECT_EQ(q % 8192, 1u);
  }
  EXPECT_EQ(64 - __builtin_clzll(p.moduli[0]), 54);
  EXPECT_EQ(64 - __builtin_clzll(p.moduli[1]), 55);
  EXPECT_EQ(p.plain_modulus, 65537u);
  EXPECT_GT(p.plain_modulus, 20u * 31 * 31);
}

TEST(BfvParams, ValidateRejectsBadChoices) {
  auto p = BfvParams::Default();
  p.degree = 3000;
  EXPECT_ERROR_CODE(p.Validate(), ErrorCode::kParamMismatch);
  p = BfvParams::Default();
  p.plain_modulus = 65535;
  EXPECT_ERROR_CODE(p.Validate(), ErrorCode::kParamMismatch);
  p = BfvParams::Default();
  p.moduli = {p.moduli[0], p.moduli[0]};
  EXPECT_ANY_THROW(MakeContext(p));
}

TEST(BfvParams, SerializationRoundTrip) {
  const auto p = BfvParams::Default();
  EXPECT_EQ(BfvParams::Deserialize(p.Serialize()), p);
  Bytes bytes = p.Serialize();
  bytes.push_back(0);
  EXPECT_ERROR_CODE(BfvParams::Deserialize(bytes), ErrorCode::kMalformedMessage);
}

TEST_F(BfvTest, EncryptDecryptSweep) {
  SeededRandom rng(1);
  for (uint64_t m = 0; m <= 31; ++m) {
    ASSERT_EQ(Decrypt(sk(), Encrypt(pk(), m, rng)), m);
  }
  EXPECT_EQ(Decrypt(sk(), Encrypt(pk(), 65536, rng)), 65536u);
  EXPECT_ERROR_CODE(Encrypt(pk(), 65537, rng), ErrorCode::kPlaintextOutOfRange);
}

TEST_F(BfvTest, FreshNoiseBudgetPositive) {
  SeededRandom rng(2);
  EXPECT_GT(NoiseBudget(sk(), Encrypt(pk(), 0, rng)), 0);
  EXPECT_GT(NoiseBudget(sk(), Encrypt(pk(), 31, rng)), 0);
}

TEST_F(BfvTest, AdditionSweep) {
  SeededRandom rng(3);
  std::vector<Ciphertext> cts;
  for (uint64_t m = 0; m <= 31; ++m) cts.push_back(Encrypt(pk(), m, rng));
  for (uint64_t a = 0; a <= 31; ++a) {
    for (uint64_t b = 0; b <= 31; ++b) {
      ASSERT_EQ(Decrypt(sk(), Add(cts[a], cts[b])), a + b);
    }
  }
}

TEST_F(BfvTest, SquaresSweep) {
  SeededRandom rng(4);
  for (uint64_t a = 0; a <= 31; ++a) {
    const auto ct = Encrypt(pk(), a, rng);
    ASSERT_EQ(Decrypt(sk(), Multiply(rk(), ct, ct)), a * a);
  }
}

TEST_F(BfvTest, MultiplicationExamples) {
  SeededRandom rng(5);
  EXPECT_EQ(Decrypt(sk(), Multiply(rk(), Encrypt(pk(), 5, rng),
                                   Encrypt(pk(), 5, rng))),
            25u);
  const auto ct = Encrypt(pk(), 17, rng);
  EXPECT_EQ(Decrypt(sk(), Multiply(rk(), Encrypt(pk(), 1, rng), ct)), 17u);
  for (int i = 0; i < 16; ++i) {
    uint64_t a = rng.Uniform(32), b = rng.Uniform(32);
    ASSERT_EQ(Decrypt(sk(), Multiply(rk(), Encrypt(pk(), a, rng),
                                     Encrypt(pk(), b, rng))),
              a * b);
  }
}

TEST_F(BfvTest, PlaintextsWrapModuloT) {
  SeededRandom rng(6);
  EXPECT_EQ(Decrypt(sk(), Add(Encrypt(pk(), 65536, rng), Encrypt(pk(), 2, rng))),
            1u);
  EXPECT_EQ(Decrypt(sk(), Multiply(rk(), Encrypt(pk(), 256, rng),
                                   Encrypt(pk(), 256, rng))),
            65536u);
  EXPECT_EQ(Decrypt(sk(), Multiply(rk(), Encrypt(pk(), 257, rng),
                                   Encrypt(pk(), 255, rng))),
            (257u * 255u) % 65537u);
}

TEST_F(BfvTest, PaperLimitAccumulation) {
  SeededRandom rng(7);
  auto acc = Encrypt(pk(), 961, rng);
  for (int i = 1; i < 20; ++i) acc = Add(acc, Encrypt(pk(), 961, rng));
  EXPECT_EQ(Decrypt(sk(), acc), 19220u);

  std::optional<Ciphertext> squares;
  for (int i = 0; i < 20; ++i) {
    const auto ct = Encrypt(pk(), 31, rng);
    auto sq = Multiply(rk(), ct, ct);
    squares = squares ? Add(*squares, sq) : sq;
  }
  EXPECT_EQ(Decrypt(sk(), *squares), 19220u);
  EXPECT_GT(NoiseBudget(sk(), *squares), 0);
}

TEST_F(BfvTest, NoiseBudgetDecreasesUnderMultiplication) {
  SeededRandom rng(8);
  const auto ct = Encrypt(pk(), 31, rng);
  const int fresh = NoiseBudget(sk(), ct);
  const auto sq = Multiply(rk(), ct, ct);
  const int after_mul = NoiseBudget(sk(), sq);
  EXPECT_GT(fresh, after_mul);
  auto acc = sq;
  for (int i = 0; i < 19; ++i) acc = Add(acc, sq);
  EXPECT_GT(NoiseBudget(sk(), acc), 0);
  EXPECT_GE(after_mul, NoiseBudget(sk(), acc));
}

TEST_F(BfvTest, SaturatedCiphertextHasNoBudget) {
  SeededRandom rng(9);
  const auto& ring = pk().context()->ring();
  Ciphertext junk(pk().context(), RandomPoly(ring, rng), RandomPoly(ring, rng),
                  pk().tag());
  EXPECT_EQ(NoiseBudget(sk(), junk), 0);
  EXPECT_ERROR_CODE(Decrypt(sk(), junk), ErrorCode::kNoiseOverflow);
}

TEST_F(BfvTest, AddZeroRerandomize) {
  SeededRandom rng(10);
  const auto ct = Encrypt(pk(), 23, rng);
  const auto r1 = AddZeroRerandomize(pk(), ct, rng);
  const auto r2 = AddZeroRerandomize(pk(), r1, rng);
  EXPECT_NE(r1.Serialize(), ct.Serialize());
  EXPECT_EQ(Decrypt(sk(), r1), 23u);
  EXPECT_EQ(Decrypt(sk(), r2), 23u);
  EXPECT_EQ(Decrypt(sk(), Add(Encrypt(pk(), 0, rng), ct)), 23u);
}

TEST_F(BfvTest, CrossKeyOperationsRejected) {
  SeededRandom rng(11);
  const auto other = Keygen(BfvParams::Default(), rng);
  EXPECT_NE(other.public_key.Serialize(), pk().Serialize());
  const auto a = Encrypt(pk(), 1, rng);
  const auto b = Encrypt(other.public_key, 1, rng);
  EXPECT_ERROR_CODE(Add(a, b), ErrorCode::kParamMismatch);
  EXPECT_ERROR_CODE(Multiply(rk(), a, b), ErrorCode::kParamMismatch);
  EXPECT_ERROR_CODE(Multiply(other.relin_key, a, a), ErrorCode::kParamMismatch);
  EXPECT_ERROR_CODE(NoiseBudget(other.secret_key, a), ErrorCode::kParamMismatch);
}

TEST_F(BfvTest, SerializationRoundTrips) {
  SeededRandom rng(12);
  const auto pk2 = PublicKey::Deserialize(pk().Serialize());
  EXPECT_EQ(pk2.Serialize(), pk().Serialize());
  EXPECT_EQ(pk2.tag(), pk().tag());
  const auto rk2 = RelinKey::Deserialize(pk2, rk().Serialize());
  EXPECT_EQ(rk2.Serialize(), rk().Serialize());

  const auto ct = Encrypt(pk(), 29, rng);
  const Bytes bytes = ct.Serialize();
  // params hash + 2 * (u32 n + n * 14-byte coefficients).
  EXPECT_EQ(bytes.size(), 32u + 2 * (4 + 4096 * 14));
  const auto back = pk2.DeserializeCiphertext(bytes);
  EXPECT_EQ(back.Serialize(), bytes);
  // Relinearizing with a deserialized key works.
  EXPECT_EQ(Decrypt(sk(), Multiply(rk2, back, back)), 841u);

  Bytes wrong_params = bytes;
  wrong_params[0] ^= 1;
  EXPECT_ERROR_CODE(pk().DeserializeCiphertext(wrong_params),
                    ErrorCode::kParamMismatch);
  Bytes truncated(bytes.begin(), bytes.end() - 1);
  EXPECT_ERROR_CODE(pk().DeserializeCiphertext(truncated),
                    ErrorCode::kMalformedMessage);
  // An unreduced coefficient (all 0xff) is rejected.
  Bytes unreduced = bytes;
  std::fill(unreduced.begin() + 36, unreduced.begin() + 50, 0xff);
  EXPECT_ERROR_CODE(pk().DeserializeCiphertext(unreduced),
                    ErrorCode::kMalformedMessage);
}

TEST(BfvSmallParams, WorkAtReducedDegree) {
  BfvParams p = BfvParams::Default();
  p.degree = 1024;
  SeededRandom rng(13);
  const auto keys = Keygen(p, rng);
  const auto ct = Encrypt(keys.public_key, 12, rng);
  EXPECT_EQ(Decrypt(keys.secret_key, Multiply(keys.relin_key, ct, ct)), 144u);
}

}  // namespace
}  // namespace jingbing::bfv
