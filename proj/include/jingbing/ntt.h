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

#ifndef JINGBING_NTT_H_
#define JINGBING_NTT_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace jingbing::ring {

using uint128 = unsigned __int128;

inline uint64_t AddMod(uint64_t a, uint64_t b, uint64_t p) {
  uint64_t s = a + b;
  return s >= p ? s - p : s;
}
inline uint64_t SubMod(uint64_t a, uint64_t b, uint64_t p) {
  return a >= b ? a - b : a + p - b;
}
inline uint64_t MulMod(uint64_t a, uint64_t b, uint64_t p) {
  return static_cast<uint64_t>(static_cast<uint128>(a) * b % p);
}
uint64_t PowMod(uint64_t base, uint64_t exp, uint64_t p);
// Inverse of a unit modulo prime p.
uint64_t InvMod(uint64_t a, uint64_t p);
// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool IsPrime(uint64_t n);

// Negacyclic number-theoretic transform over Z_p[X]/(X^n + 1) for a prime
// p < 2^62 with p = 1 (mod 2n). Forward maps coefficients to evaluations at
// the odd powers of a primitive 2n-th root of unity (bit-reversed order);
// Inverse undoes it including the 1/n scaling. Twiddle multiplications use
// Shoup's precomputed quotients.
class NttTables {
 public:
  // Throws kParamMismatch if n is not a power of two or p is not an
  // NTT-friendly prime for n.
  NttTables(size_t n, uint64_t p);

  size_t degree() const { return n_; }
  uint64_t modulus() const { return p_; }

  void Forward(std::span<uint64_t> a) const;
  void Inverse(std::span<uint64_t> a) const;

  // a <- a * b (mod X^n + 1, mod p); both inputs in coefficient form.
  void MultiplyInPlace(std::span<uint64_t> a, std::vector<uint64_t> b) const;

 private:
  size_t n_;
  uint64_t p_;
  std::vector<uint64_t> psi_rev_;
  std::vector<uint64_t> psi_rev_shoup_;
  std::vector<uint64_t> psi_inv_rev_;
  std::vector<uint64_t> psi_inv_rev_shoup_;
  uint64_t n_inv_;
  uint64_t n_inv_shoup_;
};

}  // namespace jingbing::ring

#endif  // JINGBING_NTT_H_
