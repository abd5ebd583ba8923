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

#ifndef JINGBING_BFV_H_
#define JINGBING_BFV_H_

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "jingbing/bytes.h"
#include "jingbing/random.h"
#include "jingbing/ring.h"

// BFV leveled homomorphic encryption over R_q = Z_q[X]/(X^n + 1) with
// plaintext space Z_t, encoding one scalar in the constant coefficient.
//
//   keygen:  s ternary, a uniform, e error;  pk = (b, a), b = -(a*s + e)
//   enc(m):  c0 = b*u + e1 + delta*m,  c1 = a*u + e2,  delta = floor(q/t)
//   dec(c):  m = round(t/q * (c0 + c1*s)) mod t
//   mul:     tensor product over Z (exact, via an auxiliary NTT basis),
//            scaled by t/q with round-half-up, then relinearized
//
// Relinearization decomposes c2 into base-2^w digits (w = 16 by default)
// and switches each digit with an encryption of 2^(w*j) * s^2.
//
// Errors are centered binomial with eta = 21 (sigma ~ 3.24).
namespace jingbing::bfv {

using ring::RingContext;
using ring::RingPoly;
using ring::uint128;
using KeyTag = std::array<uint8_t, 8>;

struct BfvParams {
  size_t degree = 0;
  std::vector<uint64_t> moduli;
  uint64_t plain_modulus = 0;
  int decomposition_bits = 16;

  // n = 4096, q = p54 * p55 (both = 1 mod 8192), t = 65537.
  static BfvParams Default();

  // Throws kParamMismatch on any violated invariant.
  void Validate() const;

  uint128 coeff_modulus() const;
  uint128 delta() const { return coeff_modulus() / plain_modulus; }
  // Bytes per serialized coefficient.
  size_t coeff_width() const;

  Bytes Serialize() const;
  static BfvParams Deserialize(std::span<const uint8_t> bytes);
  Digest Hash() const;

  bool operator==(const BfvParams&) const = default;
};

// Immutable precomputation shared by keys and ciphertexts: the ring over q
// plus an auxiliary NTT basis large enough to hold exact tensor products.
class BfvContext {
 public:
  explicit BfvContext(const BfvParams& params);

  const BfvParams& params() const { return params_; }
  const Digest& params_hash() const { return params_hash_; }
  const RingContext& ring() const { return ring_; }

  // Exact negacyclic products over Z of the centered lifts of the inputs,
  // each scaled by t/q with round-half-up and reduced mod q:
  //   {a0*b0, a0*b1 + a1*b0, a1*b1}
  std::array<RingPoly, 3> ScaledTensor(const RingPoly& a0, const RingPoly& a1,
                                       const RingPoly& b0,
                                       const RingPoly& b1) const;

 private:
  BfvParams params_;
  Digest params_hash_;
  RingContext ring_;
  std::vector<ring::NttTables> aux_tables_;
  struct AuxCrt;
  std::shared_ptr<const AuxCrt> aux_crt_;
};

using ContextPtr = std::shared_ptr<const BfvContext>;
ContextPtr MakeContext(const BfvParams& params);

class Ciphertext {
 public:
  Ciphertext(ContextPtr ctx, RingPoly c0, RingPoly c1, const KeyTag& tag);

  const RingPoly& c0() const { return c0_; }
  const RingPoly& c1() const { return c1_; }
  const KeyTag& tag() const { return tag_; }
  const ContextPtr& context() const { return ctx_; }

  // params hash || c0 || c1, each coefficient fixed-width big-endian.
  Bytes Serialize() const;

 private:
  ContextPtr ctx_;
  RingPoly c0_;
  RingPoly c1_;
  KeyTag tag_;
};

class PublicKey {
 public:
  PublicKey(ContextPtr ctx, RingPoly b, RingPoly a);

  const BfvParams& params() const;
  const ContextPtr& context() const { return ctx_; }
  const RingPoly& b() const { return b_; }
  const RingPoly& a() const { return a_; }
  const KeyTag& tag() const { return tag_; }

  Bytes Serialize() const;
  static PublicKey Deserialize(std::span<const uint8_t> bytes);

  Ciphertext DeserializeCiphertext(std::span<const uint8_t> bytes) const;

 private:
  ContextPtr ctx_;
  RingPoly b_;
  RingPoly a_;
  KeyTag tag_;
};

class RelinKey {
 public:
  RelinKey(ContextPtr ctx, std::vector<std::pair<RingPoly, RingPoly>> parts,
           const KeyTag& tag);

  const std::vector<std::pair<RingPoly, RingPoly>>& parts() const {
    return parts_;
  }
  const KeyTag& tag() const { return tag_; }
  const ContextPtr& context() const { return ctx_; }

  Bytes Serialize() const;
  // Binds the key to `pk`; parameters must match.
  static RelinKey Deserialize(const PublicKey& pk,
                              std::span<const uint8_t> bytes);

 private:
  friend Ciphertext Multiply(const RelinKey&, const Ciphertext&,
                             const Ciphertext&);

  ContextPtr ctx_;
  std::vector<std::pair<RingPoly, RingPoly>> parts_;
  KeyTag tag_;
  // Evaluation forms of parts_, cached for relinearization.
  std::vector<std::pair<RingContext::NttForm, RingContext::NttForm>> ntt_;
};

class SecretKey {
 public:
  SecretKey(ContextPtr ctx, RingPoly s, const KeyTag& tag)
      : ctx_(std::move(ctx)), s_(std::move(s)), tag_(tag) {}

  const RingPoly& s() const { return s_; }
  const KeyTag& tag() const { return tag_; }
  const ContextPtr& context() const { return ctx_; }

 private:
  ContextPtr ctx_;
  RingPoly s_;
  KeyTag tag_;
};

struct Keys {
  SecretKey secret_key;
  PublicKey public_key;
  RelinKey relin_key;
};

Keys Keygen(const BfvParams& params, RandomSource& rng);

Ciphertext Encrypt(const PublicKey& pk, uint64_t m, RandomSource& rng);
// Throws kNoiseOverflow when the noise budget is exhausted.
uint64_t Decrypt(const SecretKey& sk, const Ciphertext& ct);
Ciphertext Add(const Ciphertext& a, const Ciphertext& b);
Ciphertext Multiply(const RelinKey& rk, const Ciphertext& a,
                    const Ciphertext& b);
Ciphertext AddZeroRerandomize(const PublicKey& pk, const Ciphertext& ct,
                              RandomSource& rng);
// floor(log2(q / (2 * |r|))) clamped at 0, where r is the largest rounding
// residual t*[c0 + c1*s]_q - q*round(t*[c0 + c1*s]_q / q) over all
// coefficients. Decryption is reliable while the budget is positive.
int NoiseBudget(const SecretKey& sk, const Ciphertext& ct);

}  // namespace jingbing::bfv

#endif  // JINGBING_BFV_H_
