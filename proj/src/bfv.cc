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

#include <gmpxx.h>

#include <algorithm>
#include <bit>

#include "jingbing/error.h"

namespace jingbing::bfv {

namespace {

using ring::AddMod128;
using ring::SubMod128;

// 61-bit primes = 1 (mod 2^17), used only for exact tensor products.
constexpr uint64_t kAuxPrimes[] = {
    2305843009211596801ULL, 2305843009210023937ULL, 2305843009208713217ULL,
    2305843009202159617ULL, 2305843009201242113ULL, 2305843009200586753ULL,
    2305843009196916737ULL, 2305843009195868161ULL,
};
constexpr int kAuxPrimeBits = 60;  // each aux prime exceeds 2^60
constexpr int kCbdEta = 21;

int BitLength(uint128 v) {
  int bits = 0;
  while (v != 0) {
    ++bits;
    v >>= 1;
  }
  return bits;
}

mpz_class ToMpz(uint128 v) {
  mpz_class hi(static_cast<unsigned long>(static_cast<uint64_t>(v >> 64)));
  mpz_class lo(static_cast<unsigned long>(static_cast<uint64_t>(v)));
  return (hi << 64) + lo;
}

uint128 FromMpz(const mpz_class& v) {
  mpz_class lo = v & mpz_class("18446744073709551615");
  mpz_class hi = v >> 64;
  return (static_cast<uint128>(hi.get_ui()) << 64) | lo.get_ui();
}

uint128 ShiftMod(uint128 x, int bits, uint128 q) {
  for (int i = 0; i < bits; ++i) x = AddMod128(x, x, q);
  return x;
}

RingPoly SampleUniform(const RingContext& ring, RandomSource& rng) {
  const uint128 q = ring.modulus();
  const int bits = BitLength(q);
  const uint128 mask =
      bits >= 128 ? ~uint128{0} : ((uint128{1} << bits) - 1);
  RingPoly p = ring.Zero();
  for (auto& c : p.coeffs) {
    uint128 v;
    do {
      v = ((static_cast<uint128>(rng.NextU64()) << 64) | rng.NextU64()) & mask;
    } while (v >= q);
    c = v;
  }
  return p;
}

RingPoly SampleTernary(const RingContext& ring, RandomSource& rng) {
  std::vector<int64_t> v(ring.degree());
  for (auto& x : v) x = static_cast<int64_t>(rng.Uniform(3)) - 1;
  return ring.FromSigned(v);
}

RingPoly SampleError(const RingContext& ring, RandomSource& rng) {
  constexpr uint64_t kMask = (uint64_t{1} << kCbdEta) - 1;
  std::vector<int64_t> v(ring.degree());
  for (auto& x : v) {
    const uint64_t r = rng.NextU64();
    x = std::popcount(r & kMask) - std::popcount((r >> kCbdEta) & kMask);
  }
  return ring.FromSigned(v);
}

void WritePoly(ByteWriter& w, const RingPoly& p, size_t width) {
  w.PutU32(static_cast<uint32_t>(p.coeffs.size()));
  for (uint128 c : p.coeffs) {
    for (size_t i = width; i-- > 0;) {
      w.PutU8(static_cast<uint8_t>(c >> (8 * i)));
    }
  }
}

RingPoly ReadPoly(ByteReader& r, const RingContext& ring, size_t width) {
  const uint32_t n = r.GetCount(width);
  if (n != ring.degree()) {
    Fail(ErrorCode::kMalformedMessage, "polynomial degree mismatch");
  }
  RingPoly p = ring.Zero();
  for (auto& c : p.coeffs) {
    uint128 v = 0;
    for (uint8_t b : r.GetFixed(width)) v = (v << 8) | b;
    if (v >= ring.modulus()) {
      Fail(ErrorCode::kMalformedMessage, "coefficient not reduced");
    }
    c = v;
  }
  return p;
}

void CheckSameKey(const KeyTag& a, const KeyTag& b) {
  if (a != b) Fail(ErrorCode::kParamMismatch, "operands under different keys");
}

}  // namespace

BfvParams BfvParams::Default() {
  BfvParams p;
  p.degree = 4096;
  p.moduli = {18014398509309953ULL, 36028797018652673ULL};
  p.plain_modulus = 65537;
  p.decomposition_bits = 16;
  return p;
}

uint128 BfvParams::coeff_modulus() const {
  uint128 q = 1;
  for (uint64_t p : moduli) q *= p;
  return q;
}

size_t BfvParams::coeff_width() const {
  return static_cast<size_t>((BitLength(coeff_modulus()) + 7) / 8);
}

void BfvParams::Validate() const {
  if (degree < 2 || !std::has_single_bit(degree) || degree > 32768) {
    Fail(ErrorCode::kParamMismatch, "degree must be a power of two <= 32768");
  }
  if (moduli.empty()) Fail(ErrorCode::kParamMismatch, "empty modulus chain");
  // RingContext checks primality, NTT-friendliness, distinctness and size.
  RingContext check(degree, moduli);
  if (!ring::IsPrime(plain_modulus) || (plain_modulus - 1) % (2 * degree) != 0) {
    Fail(ErrorCode::kParamMismatch, "plaintext modulus must be an NTT prime");
  }
  for (uint64_t p : moduli) {
    if (plain_modulus >= p) {
      Fail(ErrorCode::kParamMismatch, "plaintext modulus must be < every q_i");
    }
  }
  if (delta() < 2) Fail(ErrorCode::kParamMismatch, "delta must be >= 2");
  const uint64_t min_prime = *std::min_element(moduli.begin(), moduli.end());
  if (decomposition_bits < 1 || decomposition_bits > 32 ||
      (uint64_t{1} << decomposition_bits) >= min_prime) {
    Fail(ErrorCode::kParamMismatch, "bad decomposition width");
  }
  const int needed = std::countr_zero(degree) + 2 * BitLength(coeff_modulus()) + 1;
  if (needed > kAuxPrimeBits * static_cast<int>(std::size(kAuxPrimes))) {
    Fail(ErrorCode::kParamMismatch, "modulus too large for tensor basis");
  }
}

Bytes BfvParams::Serialize() const {
  ByteWriter w;
  w.PutU32(static_cast<uint32_t>(degree));
  w.PutU32(static_cast<uint32_t>(moduli.size()));
  for (uint64_t p : moduli) w.PutU64(p);
  w.PutU64(plain_modulus);
  w.PutU8(static_cast<uint8_t>(decomposition_bits));
  return w.Take();
}

BfvParams BfvParams::Deserialize(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  BfvParams p;
  p.degree = r.GetU32();
  const uint32_t k = r.GetCount(8);
  for (uint32_t i = 0; i < k; ++i) p.moduli.push_back(r.GetU64());
  p.plain_modulus = r.GetU64();
  p.decomposition_bits = r.GetU8();
  r.Finish();
  try {
    p.Validate();
  } catch (const Error& e) {
    Fail(ErrorCode::kMalformedMessage, std::string("bad BFV params: ") + e.what());
  }
  return p;
}

Digest BfvParams::Hash() const { return Sha256(Serialize()); }

struct BfvContext::AuxCrt {
  mpz_class product;
  mpz_class half_product;
  std::vector<mpz_class> coefficients;  // (M/p_i) * ((M/p_i)^-1 mod p_i)
  mpz_class q;
  mpz_class two_q;
  mpz_class t;
};

BfvContext::BfvContext(const BfvParams& params)
    : params_((params.Validate(), params)),
      params_hash_(params.Hash()),
      ring_(params.degree, params.moduli) {
  const int needed = std::countr_zero(params_.degree) +
                     2 * BitLength(params_.coeff_modulus()) + 1;
  const size_t k = static_cast<size_t>((needed + kAuxPrimeBits - 1) / kAuxPrimeBits);
  auto crt = std::make_shared<AuxCrt>();
  crt->product = 1;
  for (size_t i = 0; i < k; ++i) {
    aux_tables_.emplace_back(params_.degree, kAuxPrimes[i]);
    crt->product *= static_cast<unsigned long>(kAuxPrimes[i]);
  }
  crt->half_product = crt->product / 2;
  for (size_t i = 0; i < k; ++i) {
    mpz_class p(static_cast<unsigned long>(kAuxPrimes[i]));
    mpz_class m_i = crt->product / p;
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), m_i.get_mpz_t(), p.get_mpz_t());
    crt->coefficients.push_back(m_i * inv);
  }
  crt->q = ToMpz(params_.coeff_modulus());
  crt->two_q = 2 * crt->q;
  crt->t = static_cast<unsigned long>(params_.plain_modulus);
  aux_crt_ = std::move(crt);
}

std::array<RingPoly, 3> BfvContext::ScaledTensor(const RingPoly& a0,
                                                 const RingPoly& a1,
                                                 const RingPoly& b0,
                                                 const RingPoly& b1) const {
  const size_t n = params_.degree;
  const uint128 q = ring_.modulus();
  const uint128 half_q = q / 2;
  const size_t k = aux_tables_.size();

  // Centered lift of [0, q) into (-q/2, q/2], reduced mod each aux prime.
  auto lift = [&](const RingPoly& in, size_t i) {
    const uint64_t p = aux_tables_[i].modulus();
    std::vector<uint64_t> out(n);
    for (size_t j = 0; j < n; ++j) {
      const uint128 c = in.coeffs[j];
      out[j] = c <= half_q
                   ? static_cast<uint64_t>(c % p)
                   : ring::SubMod(0, static_cast<uint64_t>((q - c) % p), p);
    }
    aux_tables_[i].Forward(out);
    return out;
  };

  // residues[o][i][j]: output o, aux prime i, coefficient j
  std::array<std::vector<std::vector<uint64_t>>, 3> residues;
  for (auto& r : residues) r.resize(k);
  for (size_t i = 0; i < k; ++i) {
    const uint64_t p = aux_tables_[i].modulus();
    const auto x0 = lift(a0, i), x1 = lift(a1, i);
    const auto y0 = lift(b0, i), y1 = lift(b1, i);
    std::vector<uint64_t> e0(n), e1(n), e2(n);
    for (size_t j = 0; j < n; ++j) {
      e0[j] = ring::MulMod(x0[j], y0[j], p);
      e1[j] = ring::AddMod(ring::MulMod(x0[j], y1[j], p),
                           ring::MulMod(x1[j], y0[j], p), p);
      e2[j] = ring::MulMod(x1[j], y1[j], p);
    }
    aux_tables_[i].Inverse(e0);
    aux_tables_[i].Inverse(e1);
    aux_tables_[i].Inverse(e2);
    residues[0][i] = std::move(e0);
    residues[1][i] = std::move(e1);
    residues[2][i] = std::move(e2);
  }

  const AuxCrt& crt = *aux_crt_;
  std::array<RingPoly, 3> out = {ring_.Zero(), ring_.Zero(), ring_.Zero()};
  mpz_class x, scaled;
  for (size_t o = 0; o < 3; ++o) {
    for (size_t j = 0; j < n; ++j) {
      x = 0;
      for (size_t i = 0; i < k; ++i) {
        x += crt.coefficients[i] * static_cast<unsigned long>(residues[o][i][j]);
      }
      mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), crt.product.get_mpz_t());
      if (x > crt.half_product) x -= crt.product;
      // round(t * x / q) = floor((2 * t * x + q) / (2 * q))
      scaled = 2 * crt.t * x + crt.q;
      mpz_fdiv_q(scaled.get_mpz_t(), scaled.get_mpz_t(), crt.two_q.get_mpz_t());
      mpz_fdiv_r(scaled.get_mpz_t(), scaled.get_mpz_t(), crt.q.get_mpz_t());
      out[o].coeffs[j] = FromMpz(scaled);
    }
  }
  return out;
}

ContextPtr MakeContext(const BfvParams& params) {
  return std::make_shared<const BfvContext>(params);
}

Ciphertext::Ciphertext(ContextPtr ctx, RingPoly c0, RingPoly c1,
                       const KeyTag& tag)
    : ctx_(std::move(ctx)), c0_(std::move(c0)), c1_(std::move(c1)), tag_(tag) {
  ctx_->ring().Check(c0_);
  ctx_->ring().Check(c1_);
}

Bytes Ciphertext::Serialize() const {
  ByteWriter w;
  w.PutFixed(ctx_->params_hash());
  const size_t width = ctx_->params().coeff_width();
  WritePoly(w, c0_, width);
  WritePoly(w, c1_, width);
  return w.Take();
}

PublicKey::PublicKey(ContextPtr ctx, RingPoly b, RingPoly a)
    : ctx_(std::move(ctx)), b_(std::move(b)), a_(std::move(a)) {
  ctx_->ring().Check(b_);
  ctx_->ring().Check(a_);
  const Digest d = Sha256(Serialize());
  std::copy_n(d.begin(), tag_.size(), tag_.begin());
}

const BfvParams& PublicKey::params() const { return ctx_->params(); }

Bytes PublicKey::Serialize() const {
  ByteWriter w;
  w.PutLengthPrefixed(ctx_->params().Serialize());
  const size_t width = ctx_->params().coeff_width();
  WritePoly(w, b_, width);
  WritePoly(w, a_, width);
  return w.Take();
}

PublicKey PublicKey::Deserialize(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  const BfvParams params = BfvParams::Deserialize(r.GetLengthPrefixed());
  ContextPtr ctx = MakeContext(params);
  const size_t width = params.coeff_width();
  RingPoly b = ReadPoly(r, ctx->ring(), width);
  RingPoly a = ReadPoly(r, ctx->ring(), width);
  r.Finish();
  return PublicKey(std::move(ctx), std::move(b), std::move(a));
}

Ciphertext PublicKey::DeserializeCiphertext(
    std::span<const uint8_t> bytes) const {
  ByteReader r(bytes);
  const auto hash = r.GetArray<32>();
  if (hash != ctx_->params_hash()) {
    Fail(ErrorCode::kParamMismatch, "ciphertext under different parameters");
  }
  const size_t width = ctx_->params().coeff_width();
  RingPoly c0 = ReadPoly(r, ctx_->ring(), width);
  RingPoly c1 = ReadPoly(r, ctx_->ring(), width);
  r.Finish();
  return Ciphertext(ctx_, std::move(c0), std::move(c1), tag_);
}

RelinKey::RelinKey(ContextPtr ctx,
                   std::vector<std::pair<RingPoly, RingPoly>> parts,
                   const KeyTag& tag)
    : ctx_(std::move(ctx)), parts_(std::move(parts)), tag_(tag) {
  const uint128 q = ctx_->params().coeff_modulus();
  const size_t expected =
      (BitLength(q) + ctx_->params().decomposition_bits - 1) /
      ctx_->params().decomposition_bits;
  if (parts_.size() != expected) {
    Fail(ErrorCode::kParamMismatch, "relinearization key has wrong length");
  }
  for (const auto& [k0, k1] : parts_) {
    ntt_.emplace_back(ctx_->ring().ToNtt(k0), ctx_->ring().ToNtt(k1));
  }
}

Bytes RelinKey::Serialize() const {
  ByteWriter w;
  w.PutLengthPrefixed(ctx_->params().Serialize());
  w.PutU32(static_cast<uint32_t>(parts_.size()));
  const size_t width = ctx_->params().coeff_width();
  for (const auto& [k0, k1] : parts_) {
    WritePoly(w, k0, width);
    WritePoly(w, k1, width);
  }
  return w.Take();
}

RelinKey RelinKey::Deserialize(const PublicKey& pk,
                               std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  const BfvParams params = BfvParams::Deserialize(r.GetLengthPrefixed());
  if (!(params == pk.params())) {
    Fail(ErrorCode::kParamMismatch, "relinearization key parameters differ");
  }
  const size_t width = params.coeff_width();
  const uint32_t count = r.GetCount(2 * (4 + width * params.degree));
  std::vector<std::pair<RingPoly, RingPoly>> parts;
  for (uint32_t i = 0; i < count; ++i) {
    RingPoly k0 = ReadPoly(r, pk.context()->ring(), width);
    RingPoly k1 = ReadPoly(r, pk.context()->ring(), width);
    parts.emplace_back(std::move(k0), std::move(k1));
  }
  r.Finish();
  try {
    return RelinKey(pk.context(), std::move(parts), pk.tag());
  } catch (const Error& e) {
    Fail(ErrorCode::kMalformedMessage, e.what());
  }
}

Keys Keygen(const BfvParams& params, RandomSource& rng) {
  ContextPtr ctx = MakeContext(params);
  const RingContext& ring = ctx->ring();
  const uint128 q = ring.modulus();

  RingPoly s = SampleTernary(ring, rng);
  RingPoly a = SampleUniform(ring, rng);
  RingPoly e = SampleError(ring, rng);
  RingPoly b = ring.Negate(ring.Add(ring.Multiply(a, s), e));
  PublicKey pk(ctx, std::move(b), std::move(a));

  const RingPoly s2 = ring.Multiply(s, s);
  const int w = params.decomposition_bits;
  const size_t digits = (BitLength(q) + w - 1) / w;
  std::vector<std::pair<RingPoly, RingPoly>> parts;
  for (size_t j = 0; j < digits; ++j) {
    RingPoly aj = SampleUniform(ring, rng);
    RingPoly ej = SampleError(ring, rng);
    RingPoly scaled_s2 = ring.Zero();
    for (size_t i = 0; i < params.degree; ++i) {
      scaled_s2.coeffs[i] = ShiftMod(s2.coeffs[i], static_cast<int>(w * j), q);
    }
    RingPoly k0 = ring.Add(ring.Negate(ring.Add(ring.Multiply(aj, s), ej)),
                           scaled_s2);
    parts.emplace_back(std::move(k0), std::move(aj));
  }
  RelinKey rk(ctx, std::move(parts), pk.tag());
  SecretKey sk(ctx, std::move(s), pk.tag());
  return Keys{std::move(sk), std::move(pk), std::move(rk)};
}

namespace {

Ciphertext EncryptInternal(const PublicKey& pk, uint64_t m,
                           RandomSource& rng) {
  const RingContext& ring = pk.context()->ring();
  RingPoly u = SampleTernary(ring, rng);
  RingPoly c0 = ring.Add(ring.Multiply(pk.b(), u), SampleError(ring, rng));
  RingPoly c1 = ring.Add(ring.Multiply(pk.a(), u), SampleError(ring, rng));
  const uint128 dm = pk.params().delta() * m;  // < q since m < t
  c0.coeffs[0] = AddMod128(c0.coeffs[0], dm, ring.modulus());
  return Ciphertext(pk.context(), std::move(c0), std::move(c1), pk.tag());
}

struct Decoded {
  uint64_t plaintext;
  int budget;
};

Decoded DecodeWithNoise(const SecretKey& sk, const Ciphertext& ct) {
  CheckSameKey(sk.tag(), ct.tag());
  const BfvContext& ctx = *sk.context();
  const RingContext& ring = ctx.ring();
  const RingPoly x = ring.Add(ct.c0(), ring.Multiply(ct.c1(), sk.s()));

  const mpz_class q = ToMpz(ring.modulus());
  const mpz_class two_q = 2 * q;
  const mpz_class t(static_cast<unsigned long>(ctx.params().plain_modulus));
  mpz_class w, m, residual, worst = 0;
  uint64_t plaintext = 0;
  for (size_t j = 0; j < x.coeffs.size(); ++j) {
    w = t * ToMpz(x.coeffs[j]);
    m = 2 * w + q;
    mpz_fdiv_q(m.get_mpz_t(), m.get_mpz_t(), two_q.get_mpz_t());
    residual = w - m * q;
    mpz_abs(residual.get_mpz_t(), residual.get_mpz_t());
    if (residual > worst) worst = residual;
    if (j == 0) {
      mpz_fdiv_r(m.get_mpz_t(), m.get_mpz_t(), t.get_mpz_t());
      plaintext = m.get_ui();
    }
  }
  const int q_bits = static_cast<int>(mpz_sizeinbase(q.get_mpz_t(), 2));
  if (worst == 0) return {plaintext, q_bits};
  // Largest b with 2 * worst * 2^b <= q.
  const mpz_class twice = 2 * worst;
  int budget = q_bits - static_cast<int>(mpz_sizeinbase(twice.get_mpz_t(), 2));
  if (budget < 0) budget = 0;
  while (budget > 0 && (twice << budget) > q) --budget;
  if ((twice << budget) > q) budget = 0;
  return {plaintext, budget};
}

}  // namespace

Ciphertext Encrypt(const PublicKey& pk, uint64_t m, RandomSource& rng) {
  if (m >= pk.params().plain_modulus) {
    Fail(ErrorCode::kPlaintextOutOfRange, "plaintext outside [0, t)");
  }
  return EncryptInternal(pk, m, rng);
}

uint64_t Decrypt(const SecretKey& sk, const Ciphertext& ct) {
  const Decoded d = DecodeWithNoise(sk, ct);
  if (d.budget <= 0) {
    Fail(ErrorCode::kNoiseOverflow, "noise budget exhausted");
  }
  return d.plaintext;
}

int NoiseBudget(const SecretKey& sk, const Ciphertext& ct) {
  return DecodeWithNoise(sk, ct).budget;
}

Ciphertext Add(const Ciphertext& a, const Ciphertext& b) {
  CheckSameKey(a.tag(), b.tag());
  const RingContext& ring = a.context()->ring();
  return Ciphertext(a.context(), ring.Add(a.c0(), b.c0()),
                    ring.Add(a.c1(), b.c1()), a.tag());
}

Ciphertext Multiply(const RelinKey& rk, const Ciphertext& a,
                    const Ciphertext& b) {
  CheckSameKey(a.tag(), b.tag());
  CheckSameKey(rk.tag(), a.tag());
  const BfvContext& ctx = *rk.context();
  const RingContext& ring = ctx.ring();
  auto [d0, d1, d2] = ctx.ScaledTensor(a.c0(), a.c1(), b.c0(), b.c1());

  // Relinearize: c2 = sum_j D_j * 2^(w*j) with base-2^w digit polynomials.
  const int w = ctx.params().decomposition_bits;
  const uint128 mask = (uint128{1} << w) - 1;
  RingContext::NttForm acc0 = ring.ZeroNtt();
  RingContext::NttForm acc1 = ring.ZeroNtt();
  for (size_t j = 0; j < rk.ntt_.size(); ++j) {
    RingPoly digit = ring.Zero();
    for (size_t i = 0; i < digit.coeffs.size(); ++i) {
      digit.coeffs[i] = (d2.coeffs[i] >> (w * j)) & mask;
    }
    const RingContext::NttForm dn = ring.ToNtt(digit);
    ring.MultiplyAccumulate(acc0, dn, rk.ntt_[j].first);
    ring.MultiplyAccumulate(acc1, dn, rk.ntt_[j].second);
  }
  RingPoly c0 = ring.Add(d0, ring.FromNtt(std::move(acc0)));
  RingPoly c1 = ring.Add(d1, ring.FromNtt(std::move(acc1)));
  return Ciphertext(rk.context(), std::move(c0), std::move(c1), a.tag());
}

Ciphertext AddZeroRerandomize(const PublicKey& pk, const Ciphertext& ct,
                              RandomSource& rng) {
  CheckSameKey(pk.tag(), ct.tag());
  return Add(ct, EncryptInternal(pk, 0, rng));
}

}  // namespace jingbing::bfv
