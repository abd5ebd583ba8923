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

#ifndef JINGBING_RING_H_
#define JINGBING_RING_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "jingbing/ntt.h"

namespace jingbing::ring {

// Element of Z_q[X]/(X^n + 1). Coefficients are reduced into [0, modulus).
struct RingPoly {
  uint128 modulus = 0;
  std::vector<uint128> coeffs;

  size_t degree() const { return coeffs.size(); }
  bool operator==(const RingPoly&) const = default;
};

// Arithmetic in Z_q[X]/(X^n + 1) where q is a product of distinct
// NTT-friendly primes and q < 2^126. Products are computed per prime with
// the negacyclic NTT and recombined with Garner's CRT.
class RingContext {
 public:
  // Throws kParamMismatch if the primes are not distinct NTT primes for n or
  // their product does not fit.
  RingContext(size_t n, std::vector<uint64_t> primes);

  size_t degree() const { return n_; }
  uint128 modulus() const { return q_; }
  const std::vector<uint64_t>& primes() const { return primes_; }

  RingPoly Zero() const;
  RingPoly FromCoefficients(std::vector<uint128> coeffs) const;
  // Maps small signed integers into [0, q).
  RingPoly FromSigned(std::span<const int64_t> values) const;

  RingPoly Add(const RingPoly& a, const RingPoly& b) const;
  RingPoly Sub(const RingPoly& a, const RingPoly& b) const;
  RingPoly Negate(const RingPoly& a) const;
  RingPoly Multiply(const RingPoly& a, const RingPoly& b) const;

  // Per-prime evaluation form, for callers that reuse one operand across
  // many products (e.g. key-switching keys).
  using NttForm = std::vector<std::vector<uint64_t>>;
  NttForm ToNtt(const RingPoly& a) const;
  RingPoly FromNtt(NttForm form) const;
  // acc += a * b pointwise in evaluation form.
  void MultiplyAccumulate(NttForm& acc, const NttForm& a,
                          const NttForm& b) const;
  NttForm ZeroNtt() const;

  // Throws kParamMismatch unless p has this ring's degree and modulus.
  void Check(const RingPoly& p) const;

 private:
  size_t n_;
  std::vector<uint64_t> primes_;
  uint128 q_;
  std::vector<NttTables> tables_;
  // Garner constants: inverse of (p_0 * ... * p_{i-1}) modulo p_i.
  std::vector<uint64_t> garner_inv_;

  RingPoly Recombine(const NttForm& residues) const;
};

// Negacyclic product of a and b reduced modulo X^n + 1 and modulo q.
inline RingPoly PolyMul(const RingPoly& a, const RingPoly& b,
                        const RingContext& ring) {
  return ring.Multiply(a, b);
}

inline uint128 AddMod128(uint128 a, uint128 b, uint128 q) {
  uint128 s = a + b;
  return s >= q ? s - q : s;
}
inline uint128 SubMod128(uint128 a, uint128 b, uint128 q) {
  return a >= b ? a - b : a + (q - b);
}

}  // namespace jingbing::ring

#endif  // JINGBING_RING_H_
