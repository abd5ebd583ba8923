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

#include "jingbing/ring.h"

#include <algorithm>

#include "jingbing/error.h"

namespace jingbing::ring {

RingContext::RingContext(size_t n, std::vector<uint64_t> primes)
    : n_(n), primes_(std::move(primes)) {
  if (primes_.empty()) Fail(ErrorCode::kParamMismatch, "no modulus primes");
  std::vector<uint64_t> sorted = primes_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    Fail(ErrorCode::kParamMismatch, "modulus primes must be distinct");
  }
  q_ = 1;
  for (uint64_t p : primes_) {
    tables_.emplace_back(n_, p);
    if (q_ > (uint128{1} << 126) / p) {
      Fail(ErrorCode::kParamMismatch, "modulus exceeds 126 bits");
    }
    q_ *= p;
  }
  uint128 prefix = 1;
  for (uint64_t p : primes_) {
    garner_inv_.push_back(InvMod(static_cast<uint64_t>(prefix % p), p));
    prefix *= p;
  }
}

RingPoly RingContext::Zero() const {
  return RingPoly{q_, std::vector<uint128>(n_, 0)};
}

RingPoly RingContext::FromCoefficients(std::vector<uint128> coeffs) const {
  RingPoly p{q_, std::move(coeffs)};
  Check(p);
  return p;
}

RingPoly RingContext::FromSigned(std::span<const int64_t> values) const {
  if (values.size() != n_) {
    Fail(ErrorCode::kParamMismatch, "coefficient count differs from degree");
  }
  RingPoly p = Zero();
  for (size_t i = 0; i < n_; ++i) {
    const int64_t v = values[i];
    p.coeffs[i] = v >= 0 ? static_cast<uint128>(v) % q_
                         : SubMod128(0, static_cast<uint128>(-v) % q_, q_);
  }
  return p;
}

void RingContext::Check(const RingPoly& p) const {
  if (p.modulus != q_ || p.coeffs.size() != n_) {
    Fail(ErrorCode::kParamMismatch, "polynomial from a different ring");
  }
  for (uint128 c : p.coeffs) {
    if (c >= q_) Fail(ErrorCode::kParamMismatch, "coefficient not reduced");
  }
}

RingPoly RingContext::Add(const RingPoly& a, const RingPoly& b) const {
  Check(a);
  Check(b);
  RingPoly out = Zero();
  for (size_t i = 0; i < n_; ++i) {
    out.coeffs[i] = AddMod128(a.coeffs[i], b.coeffs[i], q_);
  }
  return out;
}

RingPoly RingContext::Sub(const RingPoly& a, const RingPoly& b) const {
  Check(a);
  Check(b);
  RingPoly out = Zero();
  for (size_t i = 0; i < n_; ++i) {
    out.coeffs[i] = SubMod128(a.coeffs[i], b.coeffs[i], q_);
  }
  return out;
}

RingPoly RingContext::Negate(const RingPoly& a) const {
  Check(a);
  RingPoly out = Zero();
  for (size_t i = 0; i < n_; ++i) out.coeffs[i] = SubMod128(0, a.coeffs[i], q_);
  return out;
}

RingPoly RingContext::Multiply(const RingPoly& a, const RingPoly& b) const {
  Check(a);
  Check(b);
  NttForm acc = ZeroNtt();
  MultiplyAccumulate(acc, ToNtt(a), ToNtt(b));
  return FromNtt(std::move(acc));
}

RingContext::NttForm RingContext::ToNtt(const RingPoly& a) const {
  Check(a);
  NttForm form(primes_.size(), std::vector<uint64_t>(n_));
  for (size_t i = 0; i < primes_.size(); ++i) {
    const uint64_t p = primes_[i];
    for (size_t j = 0; j < n_; ++j) {
      form[i][j] = static_cast<uint64_t>(a.coeffs[j] % p);
    }
    tables_[i].Forward(form[i]);
  }
  return form;
}

RingContext::NttForm RingContext::ZeroNtt() const {
  return NttForm(primes_.size(), std::vector<uint64_t>(n_, 0));
}

void RingContext::MultiplyAccumulate(NttForm& acc, const NttForm& a,
                                     const NttForm& b) const {
  for (size_t i = 0; i < primes_.size(); ++i) {
    const uint64_t p = primes_[i];
    for (size_t j = 0; j < n_; ++j) {
      acc[i][j] = AddMod(acc[i][j], MulMod(a[i][j], b[i][j], p), p);
    }
  }
}

RingPoly RingContext::FromNtt(NttForm form) const {
  for (size_t i = 0; i < primes_.size(); ++i) tables_[i].Inverse(form[i]);
  return Recombine(form);
}

RingPoly RingContext::Recombine(const NttForm& residues) const {
  const size_t k = primes_.size();
  RingPoly out = Zero();
  for (size_t j = 0; j < n_; ++j) {
    // Garner: x = r_0 + p_0 * (t_1 + p_1 * (t_2 + ...)), evaluated forward.
    uint128 x = residues[0][j];
    uint128 prefix = primes_[0];
    for (size_t i = 1; i < k; ++i) {
      const uint64_t p = primes_[i];
      const uint64_t x_mod = static_cast<uint64_t>(x % p);
      const uint64_t t =
          MulMod(SubMod(residues[i][j], x_mod, p), garner_inv_[i], p);
      x += static_cast<uint128>(t) * prefix;
      prefix *= p;
    }
    out.coeffs[j] = x;
  }
  return out;
}

}  // namespace jingbing::ring
