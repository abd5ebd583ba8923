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

#include "jingbing/error.h"

namespace jingbing::paillier {

namespace {

constexpr int kPrimeAttempts = 64;
constexpr int kMillerRabinReps = 40;

KeyTag TagFor(const mpz_class& n) {
  const Digest d = Sha256(ToBigEndian(n));
  KeyTag tag;
  std::copy_n(d.begin(), tag.size(), tag.begin());
  return tag;
}

// Random prime of exactly `bits` bits with the top two bits set, so the
// product of two such primes has exactly 2*bits bits.
mpz_class RandomPrime(int bits, RandomSource& rng) {
  for (int attempt = 0; attempt < kPrimeAttempts; ++attempt) {
    Bytes raw((bits + 7) / 8);
    rng.Fill(raw);
    mpz_class candidate = FromBigEndian(raw);
    mpz_fdiv_r_2exp(candidate.get_mpz_t(), candidate.get_mpz_t(), bits);
    mpz_setbit(candidate.get_mpz_t(), bits - 1);
    mpz_setbit(candidate.get_mpz_t(), bits - 2);
    mpz_nextprime(candidate.get_mpz_t(), candidate.get_mpz_t());
    if (static_cast<int>(mpz_sizeinbase(candidate.get_mpz_t(), 2)) == bits &&
        mpz_probab_prime_p(candidate.get_mpz_t(), kMillerRabinReps) > 0) {
      return candidate;
    }
  }
  Fail(ErrorCode::kKeygenError, "prime generation exhausted its budget");
}

void CheckTag(const PublicKey& pk, const Ciphertext& ct) {
  if (ct.tag() != pk.tag()) {
    Fail(ErrorCode::kKeyMismatch, "ciphertext belongs to another key");
  }
}

void CheckUnit(const PublicKey& pk, const mpz_class& c) {
  if (c <= 0 || c >= pk.n_squared()) {
    Fail(ErrorCode::kInvalidCiphertext, "ciphertext outside [1, n^2)");
  }
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), c.get_mpz_t(), pk.n_squared().get_mpz_t());
  if (g != 1) Fail(ErrorCode::kInvalidCiphertext, "ciphertext not a unit");
}

mpz_class RandomUnit(const PublicKey& pk, RandomSource& rng) {
  for (;;) {
    mpz_class r = RandomBelow(pk.n(), rng);
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), r.get_mpz_t(), pk.n().get_mpz_t());
    if (r != 0 && g == 1) return r;
  }
}

mpz_class PowMod(const mpz_class& base, const mpz_class& exp,
                 const mpz_class& mod) {
  mpz_class out;
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(),
           mod.get_mpz_t());
  return out;
}

}  // namespace

mpz_class FromBigEndian(std::span<const uint8_t> bytes) {
  mpz_class v;
  if (!bytes.empty()) {
    mpz_import(v.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
  }
  return v;
}

Bytes ToBigEndian(const mpz_class& v) {
  if (v < 0) Fail(ErrorCode::kInvalidArgument, "negative integer");
  if (v == 0) return {};
  Bytes out((mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8);
  size_t written = 0;
  mpz_export(out.data(), &written, 1, 1, 1, 0, v.get_mpz_t());
  out.resize(written);
  return out;
}

mpz_class RandomBelow(const mpz_class& bound, RandomSource& rng) {
  Bytes raw((mpz_sizeinbase(bound.get_mpz_t(), 2) + 64 + 7) / 8);
  rng.Fill(raw);
  mpz_class v = FromBigEndian(raw);
  mpz_mod(v.get_mpz_t(), v.get_mpz_t(), bound.get_mpz_t());
  return v;
}

PublicKey::PublicKey(mpz_class n)
    : n_(std::move(n)), n_squared_(n_ * n_), tag_(TagFor(n_)) {
  if (n_ < 3 || mpz_even_p(n_.get_mpz_t())) {
    Fail(ErrorCode::kInvalidArgument, "Paillier modulus must be odd and > 2");
  }
}

Bytes PublicKey::Serialize() const {
  ByteWriter w;
  w.PutLengthPrefixed(ToBigEndian(n_));
  return w.Take();
}

PublicKey PublicKey::Deserialize(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  Bytes n = r.GetLengthPrefixed();
  r.Finish();
  if (n.empty() || n[0] == 0) {
    Fail(ErrorCode::kMalformedMessage, "non-canonical Paillier modulus");
  }
  try {
    return PublicKey(FromBigEndian(n));
  } catch (const Error& e) {
    Fail(ErrorCode::kMalformedMessage, e.what());
  }
}

SecretKey SecretKey::FromPrimes(const mpz_class& p, const mpz_class& q) {
  if (p == q || mpz_probab_prime_p(p.get_mpz_t(), kMillerRabinReps) == 0 ||
      mpz_probab_prime_p(q.get_mpz_t(), kMillerRabinReps) == 0) {
    Fail(ErrorCode::kKeygenError, "p and q must be distinct primes");
  }
  mpz_class n = p * q;
  mpz_class phi = (p - 1) * (q - 1);
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), phi.get_mpz_t());
  if (g != 1) Fail(ErrorCode::kKeygenError, "gcd(n, phi(n)) != 1");

  mpz_class lambda;
  mpz_lcm(lambda.get_mpz_t(), mpz_class(p - 1).get_mpz_t(),
          mpz_class(q - 1).get_mpz_t());
  PublicKey pk(n);
  // With g = n + 1: L(g^lambda mod n^2) = lambda mod n, so mu = lambda^-1.
  mpz_class u = PowMod(n + 1, lambda, pk.n_squared());
  mpz_class l = (u - 1) / n;
  mpz_class mu;
  if (mpz_invert(mu.get_mpz_t(), l.get_mpz_t(), n.get_mpz_t()) == 0) {
    Fail(ErrorCode::kKeygenError, "decryption constant not invertible");
  }
  return SecretKey(std::move(pk), p, q, std::move(lambda), std::move(mu));
}

Bytes Ciphertext::Serialize() const {
  ByteWriter w;
  w.PutLengthPrefixed(ToBigEndian(value_));
  return w.Take();
}

Ciphertext Ciphertext::Deserialize(const PublicKey& pk,
                                   std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  Bytes mag = r.GetLengthPrefixed();
  r.Finish();
  if (mag.empty() || mag[0] == 0) {
    Fail(ErrorCode::kMalformedMessage, "non-canonical ciphertext encoding");
  }
  mpz_class v = FromBigEndian(mag);
  if (v >= pk.n_squared()) {
    Fail(ErrorCode::kMalformedMessage, "ciphertext exceeds n^2");
  }
  return Ciphertext(std::move(v), pk.tag());
}

SecretKey Keygen(int bits, RandomSource& rng) {
  if (bits != 512 && bits != 1024 && bits != 2048) {
    Fail(ErrorCode::kInvalidArgument, "key size must be 512, 1024 or 2048");
  }
  for (int attempt = 0; attempt < kPrimeAttempts; ++attempt) {
    mpz_class p = RandomPrime(bits / 2, rng);
    mpz_class q = RandomPrime(bits / 2, rng);
    if (p == q) continue;
    try {
      return SecretKey::FromPrimes(p, q);
    } catch (const Error&) {
      continue;
    }
  }
  Fail(ErrorCode::kKeygenError, "could not find a valid key pair");
}

Ciphertext EncryptWithNonce(const PublicKey& pk, const mpz_class& m,
                            const mpz_class& r) {
  if (m < 0 || m >= pk.n()) {
    Fail(ErrorCode::kPlaintextOutOfRange, "plaintext outside [0, n)");
  }
  // (1 + n)^m = 1 + m*n  (mod n^2)
  mpz_class gm = (1 + m * pk.n()) % pk.n_squared();
  mpz_class c = (gm * PowMod(r, pk.n(), pk.n_squared())) % pk.n_squared();
  return Ciphertext(std::move(c), pk.tag());
}

Ciphertext Encrypt(const PublicKey& pk, const mpz_class& m, RandomSource& rng) {
  if (m < 0 || m >= pk.n()) {
    Fail(ErrorCode::kPlaintextOutOfRange, "plaintext outside [0, n)");
  }
  return EncryptWithNonce(pk, m, RandomUnit(pk, rng));
}

mpz_class Decrypt(const SecretKey& sk, const Ciphertext& ct) {
  const PublicKey& pk = sk.public_key();
  CheckTag(pk, ct);
  CheckUnit(pk, ct.value());
  mpz_class u = PowMod(ct.value(), sk.lambda(), pk.n_squared());
  mpz_class l = (u - 1) / pk.n();
  return (l * sk.mu()) % pk.n();
}

Ciphertext Add(const PublicKey& pk, const Ciphertext& a, const Ciphertext& b) {
  CheckTag(pk, a);
  CheckTag(pk, b);
  return Ciphertext((a.value() * b.value()) % pk.n_squared(), pk.tag());
}

Ciphertext Rerandomize(const PublicKey& pk, const Ciphertext& ct,
                       RandomSource& rng) {
  CheckTag(pk, ct);
  CheckUnit(pk, ct.value());
  mpz_class rn = PowMod(RandomUnit(pk, rng), pk.n(), pk.n_squared());
  return Ciphertext((ct.value() * rn) % pk.n_squared(), pk.tag());
}

}  // namespace jingbing::paillier
