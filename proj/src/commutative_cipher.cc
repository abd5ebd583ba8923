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

#include "jingbing/commutative_cipher.h"

#include <sodium.h>

#include <algorithm>

#include "jingbing/error.h"

namespace jingbing::cipher {

namespace {

constexpr size_t kSha512Bytes = crypto_hash_sha512_BYTES;
constexpr size_t kSha512BlockBytes = 128;

bool IsAllZero(std::span<const uint8_t> b) {
  return std::all_of(b.begin(), b.end(), [](uint8_t x) { return x == 0; });
}

}  // namespace

Bytes ExpandMessageXmdSha512(std::span<const uint8_t> msg,
                             std::span<const uint8_t> dst, size_t out_len) {
  const size_t ell = (out_len + kSha512Bytes - 1) / kSha512Bytes;
  if (ell > 255 || out_len > 65535 || dst.size() > 255 || dst.empty()) {
    Fail(ErrorCode::kInvalidArgument, "expand_message_xmd: bad lengths");
  }
  Bytes dst_prime(dst.begin(), dst.end());
  dst_prime.push_back(static_cast<uint8_t>(dst.size()));

  crypto_hash_sha512_state st;
  std::array<uint8_t, kSha512Bytes> b0;
  {
    const std::array<uint8_t, kSha512BlockBytes> z_pad{};
    const uint8_t suffix[3] = {static_cast<uint8_t>(out_len >> 8),
                               static_cast<uint8_t>(out_len), 0};
    crypto_hash_sha512_init(&st);
    crypto_hash_sha512_update(&st, z_pad.data(), z_pad.size());
    crypto_hash_sha512_update(&st, msg.data(), msg.size());
    crypto_hash_sha512_update(&st, suffix, sizeof(suffix));
    crypto_hash_sha512_update(&st, dst_prime.data(), dst_prime.size());
    crypto_hash_sha512_final(&st, b0.data());
  }

  Bytes out;
  out.reserve(ell * kSha512Bytes);
  std::array<uint8_t, kSha512Bytes> prev{};
  for (size_t i = 1; i <= ell; ++i) {
    std::array<uint8_t, kSha512Bytes> in;
    for (size_t j = 0; j < kSha512Bytes; ++j) {
      in[j] = (i == 1) ? b0[j] : static_cast<uint8_t>(b0[j] ^ prev[j]);
    }
    const uint8_t counter = static_cast<uint8_t>(i);
    crypto_hash_sha512_init(&st);
    crypto_hash_sha512_update(&st, in.data(), in.size());
    crypto_hash_sha512_update(&st, &counter, 1);
    crypto_hash_sha512_update(&st, dst_prime.data(), dst_prime.size());
    crypto_hash_sha512_final(&st, prev.data());
    out.insert(out.end(), prev.begin(), prev.end());
  }
  out.resize(out_len);
  return out;
}

GroupElement GroupElement::FromBytes(std::span<const uint8_t> bytes) {
  EnsureCryptoInitialized();
  if (bytes.size() != kGroupElementSize ||
      crypto_core_ristretto255_is_valid_point(bytes.data()) != 1 ||
      IsAllZero(bytes)) {
    Fail(ErrorCode::kInvalidGroupElement, "not a canonical group element");
  }
  std::array<uint8_t, kGroupElementSize> b;
  std::copy(bytes.begin(), bytes.end(), b.begin());
  return GroupElement(b);
}

GroupScalar GroupScalar::Random(RandomSource& rng) {
  EnsureCryptoInitialized();
  std::array<uint8_t, kScalarSize> s;
  do {
    std::array<uint8_t, crypto_core_ristretto255_NONREDUCEDSCALARBYTES> wide;
    rng.Fill(wide);
    crypto_core_ristretto255_scalar_reduce(s.data(), wide.data());
  } while (IsAllZero(s));
  return GroupScalar(s);
}

GroupScalar GroupScalar::FromBytes(std::span<const uint8_t> bytes) {
  EnsureCryptoInitialized();
  if (bytes.size() != kScalarSize) {
    Fail(ErrorCode::kInvalidArgument, "scalar must be 32 bytes");
  }
  // Reduce a zero-extended copy; canonical iff reduction is a no-op.
  std::array<uint8_t, crypto_core_ristretto255_NONREDUCEDSCALARBYTES> wide{};
  std::copy(bytes.begin(), bytes.end(), wide.begin());
  std::array<uint8_t, kScalarSize> reduced;
  crypto_core_ristretto255_scalar_reduce(reduced.data(), wide.data());
  if (!std::equal(reduced.begin(), reduced.end(), bytes.begin()) ||
      IsAllZero(reduced)) {
    Fail(ErrorCode::kInvalidArgument, "scalar out of range");
  }
  return GroupScalar(reduced);
}

GroupScalar GroupScalar::FromUint64(uint64_t v) {
  std::array<uint8_t, kScalarSize> b{};
  for (int i = 0; i < 8; ++i) b[i] = static_cast<uint8_t>(v >> (8 * i));
  return FromBytes(b);
}

GroupElement HashToGroup(std::span<const uint8_t> id) {
  EnsureCryptoInitialized();
  if (id.empty() || id.size() > kMaxIdentifierSize) {
    Fail(ErrorCode::kInvalidIdentifier,
         "identifier must be 1.." + std::to_string(kMaxIdentifierSize) +
             " bytes");
  }
  const Bytes uniform = ExpandMessageXmdSha512(
      id,
      std::span(reinterpret_cast<const uint8_t*>(kHashToGroupDst.data()),
                kHashToGroupDst.size()),
      crypto_core_ristretto255_HASHBYTES);
  std::array<uint8_t, kGroupElementSize> out;
  crypto_core_ristretto255_from_hash(out.data(), uniform.data());
  if (IsAllZero(out)) {
    // Probability ~2^-252; treated as an unusable identifier.
    Fail(ErrorCode::kInvalidIdentifier, "identifier hashes to identity");
  }
  return GroupElement(out);
}

GroupElement Encrypt(const GroupScalar& k, std::span<const uint8_t> id) {
  return Reencrypt(k, HashToGroup(id));
}

GroupElement Reencrypt(const GroupScalar& k, const GroupElement& g) {
  std::array<uint8_t, kGroupElementSize> out;
  if (crypto_scalarmult_ristretto255(out.data(), k.bytes().data(),
                                     g.bytes().data()) != 0) {
    // Unreachable for a nonzero scalar below the group order.
    Fail(ErrorCode::kInvalidGroupElement, "exponentiation produced identity");
  }
  return GroupElement(out);
}

GroupElement Reencrypt(const GroupScalar& k, std::span<const uint8_t> encoded) {
  return Reencrypt(k, GroupElement::FromBytes(encoded));
}

}  // namespace jingbing::cipher
