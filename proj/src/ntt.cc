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

#include "jingbing/ntt.h"

#include <bit>

#include "jingbing/error.h"

namespace jingbing::ring {

namespace {

uint64_t ShoupQuotient(uint64_t w, uint64_t p) {
  return static_cast<uint64_t>((static_cast<uint128>(w) << 64) / p);
}

// x * w mod p given w_shoup = floor(w * 2^64 / p). Requires p < 2^63.
inline uint64_t MulShoup(uint64_t x, uint64_t w, uint64_t w_shoup,
                         uint64_t p) {
  uint64_t q = static_cast<uint64_t>((static_cast<uint128>(x) * w_shoup) >> 64);
  uint64_t r = x * w - q * p;
  return r >= p ? r - p : r;
}

size_t BitReverse(size_t x, int bits) {
  size_t r = 0;
  for (int i = 0; i < bits; ++i) {
    r = (r << 1) | (x & 1);
    x >>= 1;
  }
  return r;
}

}  // namespace

uint64_t PowMod(uint64_t base, uint64_t exp, uint64_t p) {
  uint64_t result = 1 % p;
  base %= p;
  while (exp > 0) {
    if (exp & 1) result = MulMod(result, base, p);
    base = MulMod(base, base, p);
    exp >>= 1;
  }
  return result;
}

uint64_t InvMod(uint64_t a, uint64_t p) { return PowMod(a, p - 2, p); }

bool IsPrime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t small : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % small == 0) return n == small;
  }
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    uint64_t x = PowMod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = MulMod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

NttTables::NttTables(size_t n, uint64_t p) : n_(n), p_(p) {
  if (n < 2 || !std::has_single_bit(n)) {
    Fail(ErrorCode::kParamMismatch, "ring degree must be a power of two >= 2");
  }
  if (p >= (uint64_t{1} << 62) || (p - 1) % (2 * n) != 0 || !IsPrime(p)) {
    Fail(ErrorCode::kParamMismatch,
         "modulus " + std::to_string(p) + " is not an NTT prime for n=" +
             std::to_string(n));
  }
  // psi: primitive 2n-th root of unity. g^((p-1)/2n) has order exactly 2n
  // iff its n-th power is -1.
  uint64_t psi = 0;
  for (uint64_t g = 2; g < p; ++g) {
    uint64_t cand = PowMod(g, (p - 1) / (2 * n), p);
    if (PowMod(cand, n, p) == p - 1) {
      psi = cand;
      break;
    }
  }
  const uint64_t psi_inv = InvMod(psi, p);
  const int log_n = std::countr_zero(n);

  psi_rev_.resize(n);
  psi_inv_rev_.resize(n);
  psi_rev_shoup_.resize(n);
  psi_inv_rev_shoup_.resize(n);
  uint64_t pw = 1, pw_inv = 1;
  std::vector<uint64_t> powers(n), inv_powers(n);
  for (size_t i = 0; i < n; ++i) {
    powers[i] = pw;
    inv_powers[i] = pw_inv;
    pw = MulMod(pw, psi, p);
    pw_inv = MulMod(pw_inv, psi_inv, p);
  }
  for (size_t i = 0; i < n; ++i) {
    size_t r = BitReverse(i, log_n);
    psi_rev_[i] = powers[r];
    psi_inv_rev_[i] = inv_powers[r];
    psi_rev_shoup_[i] = ShoupQuotient(psi_rev_[i], p);
    psi_inv_rev_shoup_[i] = ShoupQuotient(psi_inv_rev_[i], p);
  }
  n_inv_ = InvMod(static_cast<uint64_t>(n % p), p);
  n_inv_shoup_ = ShoupQuotient(n_inv_, p);
}

void NttTables::Forward(std::span<uint64_t> a) const {
  size_t t = n_;
  for (size_t m = 1; m < n_; m <<= 1) {
    t >>= 1;
    for (size_t i = 0; i < m; ++i) {
      const size_t j1 = 2 * i * t;
      const uint64_t w = psi_rev_[m + i];
      const uint64_t ws = psi_rev_shoup_[m + i];
      for (size_t j = j1; j < j1 + t; ++j) {
        uint64_t u = a[j];
        uint64_t v = MulShoup(a[j + t], w, ws, p_);
        a[j] = AddMod(u, v, p_);
        a[j + t] = SubMod(u, v, p_);
      }
    }
  }
}

void NttTables::Inverse(std::span<uint64_t> a) const {
  size_t t = 1;
  for (size_t m = n_; m > 1; m >>= 1) {
    const size_t h = m >> 1;
    size_t j1 = 0;
    for (size_t i = 0; i < h; ++i) {
      const uint64_t w = psi_inv_rev_[h + i];
      const uint64_t ws = psi_inv_rev_shoup_[h + i];
      for (size_t j = j1; j < j1 + t; ++j) {
        uint64_t u = a[j];
        uint64_t v = a[j + t];
        a[j] = AddMod(u, v, p_);
        a[j + t] = MulShoup(SubMod(u, v, p_), w, ws, p_);
      }
      j1 += 2 * t;
    }
    t <<= 1;
  }
  for (auto& x : a) x = MulShoup(x, n_inv_, n_inv_shoup_, p_);
}

void NttTables::MultiplyInPlace(std::span<uint64_t> a,
                                std::vector<uint64_t> b) const {
  Forward(a);
  Forward(b);
  for (size_t i = 0; i < n_; ++i) a[i] = MulMod(a[i], b[i], p_);
  Inverse(a);
}

}  // namespace jingbing::ring
