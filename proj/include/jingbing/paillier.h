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

#ifndef JINGBING_PAILLIER_H_
#define JINGBING_PAILLIER_H_

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <span>

#include "jingbing/bytes.h"
#include "jingbing/random.h"

// Paillier cryptosystem with generator g = n + 1.
//
//   Enc(m; r) = (1 + m*n) * r^n  mod n^2
//   Dec(c)    = L(c^lambda mod n^2) * mu  mod n,   L(u) = (u - 1) / n
//
// Ciphertexts remember an 8-byte tag derived from n so that combining
// ciphertexts under different keys is caught instead of silently producing
// garbage.
namespace jingbing::paillier {

using KeyTag = std::array<uint8_t, 8>;

inline constexpr int kDefaultKeyBits = 2048;
inline constexpr int kTestKeyBits = 512;

class PublicKey {
 public:
  explicit PublicKey(mpz_class n);

  const mpz_class& n() const { return n_; }
  const mpz_class& n_squared() const { return n_squared_; }
  size_t bits() const { return mpz_sizeinbase(n_.get_mpz_t(), 2); }
  const KeyTag& tag() const { return tag_; }

  // Big-endian n, length-prefixed.
  Bytes Serialize() const;
  static PublicKey Deserialize(std::span<const uint8_t> bytes);

 private:
  mpz_class n_;
  mpz_class n_squared_;
  KeyTag tag_;
};

class SecretKey {
 public:
  // Builds the key from two distinct primes. Used by keygen and for
  // hand-checkable toy keys.
  static SecretKey FromPrimes(const mpz_class& p, const mpz_class& q);

  const PublicKey& public_key() const { return public_key_; }
  const mpz_class& lambda() const { return lambda_; }
  const mpz_class& mu() const { return mu_; }

 private:
  SecretKey(PublicKey pk, mpz_class p, mpz_class q, mpz_class lambda,
            mpz_class mu)
      : public_key_(std::move(pk)), p_(std::move(p)), q_(std::move(q)),
        lambda_(std::move(lambda)), mu_(std::move(mu)) {}

  PublicKey public_key_;
  mpz_class p_;
  mpz_class q_;
  mpz_class lambda_;
  mpz_class mu_;
};

class Ciphertext {
 public:
  Ciphertext(mpz_class value, const KeyTag& tag)
      : value_(std::move(value)), tag_(tag) {}

  const mpz_class& value() const { return value_; }
  const KeyTag& tag() const { return tag_; }

  // Big-endian magnitude, length-prefixed.
  Bytes Serialize() const;
  // Range-checks against pk: value must lie in [1, n^2 - 1].
  static Ciphertext Deserialize(const PublicKey& pk,
                                std::span<const uint8_t> bytes);

  bool operator==(const Ciphertext& o) const {
    return value_ == o.value_ && tag_ == o.tag_;
  }

 private:
  mpz_class value_;
  KeyTag tag_;
};

// Throws kKeygenError if no suitable primes are found within the attempt
// budget, kInvalidArgument for unsupported sizes.
SecretKey Keygen(int bits, RandomSource& rng);

Ciphertext Encrypt(const PublicKey& pk, const mpz_class& m, RandomSource& rng);
// Explicit-nonce variant; r must be a unit mod n.
Ciphertext EncryptWithNonce(const PublicKey& pk, const mpz_class& m,
                            const mpz_class& r);
mpz_class Decrypt(const SecretKey& sk, const Ciphertext& ct);
Ciphertext Add(const PublicKey& pk, const Ciphertext& a, const Ciphertext& b);
Ciphertext Rerandomize(const PublicKey& pk, const Ciphertext& ct,
                       RandomSource& rng);

// Uniform integer in [0, bound) using 64 extra bits of randomness.
mpz_class RandomBelow(const mpz_class& bound, RandomSource& rng);

mpz_class FromBigEndian(std::span<const uint8_t> bytes);
Bytes ToBigEndian(const mpz_class& v);

}  // namespace jingbing::paillier

#endif  // JINGBING_PAILLIER_H_
