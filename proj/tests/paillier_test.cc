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

#include "jingbing/paillier.h"

#include <gtest/gtest.h>

#include "test_util.h"

namespace jingbing::paillier {
namespace {

class PaillierTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    SeededRandom rng(512);
    key_ = new SecretKey(Keygen(kTestKeyBits, rng));
  }
  static void TearDownTestSuite() { delete key_; }

  static const SecretKey& sk() { return *key_; }
  static const PublicKey& pk() { return key_->public_key(); }

  static SecretKey* key_;
};
SecretKey* PaillierTest::key_ = nullptr;

TEST(PaillierToyKey, HandComputedEncryption) {
  const auto sk = SecretKey::FromPrimes(5, 7);
  const auto& pk = sk.public_key();
  EXPECT_EQ(pk.n(), 35);
  EXPECT_EQ(pk.n_squared(), 1225);
  EXPECT_EQ(sk.lambda(), 12);
  EXPECT_EQ(sk.mu(), 3);
  // (1 + 35)^4 * 2^35 mod 1225.
  const auto ct = EncryptWithNonce(pk, 4, 2);
  EXPECT_EQ(ct.value(), 88);
  EXPECT_EQ(Decrypt(sk, ct), 4);
}

TEST(PaillierToyKey, ExhaustiveRoundTripAndAddition) {
  const auto sk = SecretKey::FromPrimes(5, 7);
  const auto& pk = sk.public_key();
  SeededRandom rng(35);
  std::vector<Ciphertext> cts;
  for (int m = 0; m < 35; ++m) {
    cts.push_back(Encrypt(pk, m, rng));
    ASSERT_EQ(Decrypt(sk, cts.back()), m);
  }
  for (int a = 0; a < 35; ++a) {
    for (int b = 0; b < 35; ++b) {
      ASSERT_EQ(Decrypt(sk, Add(pk, cts[a], cts[b])), (a + b) % 35)
          << a << " + " << b;
    }
  }
}

TEST(PaillierToyKey, KeyInvariant) {
  const auto sk = SecretKey::FromPrimes(5, 7);
  const mpz_class n = 35, n2 = 1225;
  mpz_class u;
  mpz_powm(u.get_mpz_t(), mpz_class(n + 1).get_mpz_t(), sk.lambda().get_mpz_t(),
           n2.get_mpz_t());
  EXPECT_EQ((sk.mu() * ((u - 1) / n)) % n, 1);
}

TEST_F(PaillierTest, KeySizeAndParity) {
  EXPECT_EQ(pk().bits(), 512u);
  EXPECT_TRUE(mpz_odd_p(pk().n().get_mpz_t()));
}

TEST_F(PaillierTest, RoundTrips) {
  SeededRandom rng(1);
  EXPECT_EQ(Decrypt(sk(), Encrypt(pk(), 0, rng)), 0);
  EXPECT_EQ(Decrypt(sk(), Encrypt(pk(), 5, rng)), 5);
  EXPECT_EQ(Decrypt(sk(), Encrypt(pk(), pk().n() - 1, rng)), pk().n() - 1);
}

TEST_F(PaillierTest, EncryptionIsRandomized) {
  SeededRandom rng(2);
  const auto a = Encrypt(pk(), 42, rng);
  const auto b = Encrypt(pk(), 42, rng);
  EXPECT_NE(a.value(), b.value());
  EXPECT_EQ(Decrypt(sk(), a), Decrypt(sk(), b));
}

TEST_F(PaillierTest, PlaintextOutOfRange) {
  SeededRandom rng(3);
  EXPECT_ERROR_CODE(Encrypt(pk(), pk().n(), rng), ErrorCode::kPlaintextOutOfRange);
  EXPECT_ERROR_CODE(Encrypt(pk(), -1, rng), ErrorCode::kPlaintextOutOfRange);
}

TEST_F(PaillierTest, InvalidCiphertexts) {
  EXPECT_ERROR_CODE(Decrypt(sk(), Ciphertext(pk().n_squared(), pk().tag())),
                    ErrorCode::kInvalidCiphertext);
  EXPECT_ERROR_CODE(Decrypt(sk(), Ciphertext(0, pk().tag())),
                    ErrorCode::kInvalidCiphertext);
  // A multiple of n is not a unit modulo n^2.
  EXPECT_ERROR_CODE(Decrypt(sk(), Ciphertext(pk().n(), pk().tag())),
                    ErrorCode::kInvalidCiphertext);
}

TEST_F(PaillierTest, AdditionSweep) {
  SeededRandom rng(4);
  for (int i = 0; i < 1000; ++i) {
    const mpz_class a = RandomBelow(pk().n(), rng);
    const mpz_class b = RandomBelow(pk().n(), rng);
    ASSERT_EQ(Decrypt(sk(), Add(pk(), Encrypt(pk(), a, rng), Encrypt(pk(), b, rng))),
              mpz_class((a + b) % pk().n()));
  }
}

TEST_F(PaillierTest, AdditionExamples) {
  SeededRandom rng(5);
  const auto ct = Encrypt(pk(), 77, rng);
  EXPECT_EQ(Decrypt(sk(), Add(pk(), Encrypt(pk(), 0, rng), ct)), 77);
  EXPECT_EQ(Decrypt(sk(), Add(pk(), Encrypt(pk(), 3, rng), Encrypt(pk(), 4, rng))), 7);
  auto acc = Encrypt(pk(), 31, rng);
  for (int i = 1; i < 20; ++i) acc = Add(pk(), acc, Encrypt(pk(), 31, rng));
  EXPECT_EQ(Decrypt(sk(), acc), 620);
}

TEST_F(PaillierTest, KeyMismatchDetected) {
  SeededRandom rng(6);
  const auto other = Keygen(kTestKeyBits, rng);
  const auto a = Encrypt(pk(), 1, rng);
  const auto b = Encrypt(other.public_key(), 1, rng);
  EXPECT_ERROR_CODE(Add(pk(), a, b), ErrorCode::kKeyMismatch);
  EXPECT_ERROR_CODE(Decrypt(other, a), ErrorCode::kKeyMismatch);
}

TEST_F(PaillierTest, Rerandomize) {
  SeededRandom rng(7);
  const auto ct = Encrypt(pk(), 9, rng);
  const auto r1 = Rerandomize(pk(), ct, rng);
  const auto r2 = Rerandomize(pk(), ct, rng);
  EXPECT_EQ(Decrypt(sk(), r1), 9);
  EXPECT_EQ(Decrypt(sk(), r2), 9);
  EXPECT_NE(r1.Serialize(), ct.Serialize());
  EXPECT_NE(r1.Serialize(), r2.Serialize());
}

TEST_F(PaillierTest, Serialization) {
  SeededRandom rng(8);
  const auto pk2 = PublicKey::Deserialize(pk().Serialize());
  EXPECT_EQ(pk2.n(), pk().n());
  EXPECT_EQ(pk2.tag(), pk().tag());
  const auto ct = Encrypt(pk(), 123, rng);
  EXPECT_EQ(Ciphertext::Deserialize(pk(), ct.Serialize()), ct);

  // Leading zero byte in the magnitude is non-canonical.
  Bytes padded = ct.Serialize();
  padded.insert(padded.begin() + 4, 0);
  padded[3] += 1;
  EXPECT_ERROR_CODE(Ciphertext::Deserialize(pk(), padded),
                    ErrorCode::kMalformedMessage);
  // Values at or above n^2 are rejected.
  ByteWriter w;
  w.PutLengthPrefixed(ToBigEndian(pk().n_squared()));
  EXPECT_ERROR_CODE(Ciphertext::Deserialize(pk(), w.bytes()),
                    ErrorCode::kMalformedMessage);
}

TEST(PaillierKeygen, SupportedSizes) {
  SeededRandom rng(9);
  EXPECT_ERROR_CODE(Keygen(768, rng), ErrorCode::kInvalidArgument);
  EXPECT_EQ(Keygen(1024, rng).public_key().bits(), 1024u);
}

}  // namespace
}  // namespace jingbing::paillier
