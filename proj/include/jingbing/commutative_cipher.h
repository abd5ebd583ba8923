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

#ifndef JINGBING_COMMUTATIVE_CIPHER_H_
#define JINGBING_COMMUTATIVE_CIPHER_H_

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "jingbing/bytes.h"
#include "jingbing/random.h"

// Commutative cipher over the ristretto255 prime-order group
// (order 2^252 + 27742317777372353535851937790883648493).
//
//   HashToGroup(x)    = ristretto255 hash-to-group of x
//                       (expand_message_xmd with SHA-512, 64 bytes, then the
//                       two-map Elligator construction)
//   Encrypt(k, x)     = HashToGroup(x)^k
//   Reencrypt(k, g)   = g^k
//
// Since exponentiation commutes, Reencrypt(b, Encrypt(a, x)) equals
// Reencrypt(a, Encrypt(b, x)). Group elements travel as their canonical
// 32-byte ristretto255 encoding; intersections compare those bytes directly.
namespace jingbing::cipher {

class GroupScalar;

inline constexpr size_t kGroupElementSize = 32;
inline constexpr size_t kScalarSize = 32;
inline constexpr size_t kMaxIdentifierSize = 128;

// Domain separation tag of the pinned hash-to-group suite. Changing it
// changes every group element and therefore the protocol version.
inline constexpr std::string_view kHashToGroupDst =
    "JINGBING-V01-CS01-with-ristretto255_XMD:SHA-512_R255MAP_RO_";

class GroupElement {
 public:
  // Validates canonical encoding; rejects the identity.
  static GroupElement FromBytes(std::span<const uint8_t> bytes);

  const std::array<uint8_t, kGroupElementSize>& bytes() const {
    return bytes_;
  }

  auto operator<=>(const GroupElement&) const = default;

 private:
  explicit GroupElement(const std::array<uint8_t, kGroupElementSize>& b)
      : bytes_(b) {}
  friend GroupElement HashToGroup(std::span<const uint8_t>);
  friend GroupElement Reencrypt(const GroupScalar&, const GroupElement&);

  std::array<uint8_t, kGroupElementSize> bytes_;
};

struct GroupElementHash {
  size_t operator()(const GroupElement& g) const {
    size_t h = 0;
    for (int i = 0; i < 8; ++i) h = (h << 8) | g.bytes()[i];
    return h;
  }
};

// Exponent in [1, order-1], little-endian.
class GroupScalar {
 public:
  static GroupScalar Random(RandomSource& rng);
  // Rejects zero and non-reduced encodings.
  static GroupScalar FromBytes(std::span<const uint8_t> bytes);
  static GroupScalar FromUint64(uint64_t v);

  const std::array<uint8_t, kScalarSize>& bytes() const { return bytes_; }
  bool operator==(const GroupScalar&) const = default;

 private:
  explicit GroupScalar(const std::array<uint8_t, kScalarSize>& b)
      : bytes_(b) {}

  std::array<uint8_t, kScalarSize> bytes_;
};

// RFC 9380 expand_message_xmd instantiated with SHA-512.
Bytes ExpandMessageXmdSha512(std::span<const uint8_t> msg,
                             std::span<const uint8_t> dst, size_t out_len);

GroupElement HashToGroup(std::span<const uint8_t> id);
inline GroupScalar Keygen(RandomSource& rng) { return GroupScalar::Random(rng); }
GroupElement Encrypt(const GroupScalar& k, std::span<const uint8_t> id);
GroupElement Reencrypt(const GroupScalar& k, const GroupElement& g);
// Decodes `encoded` first; malformed input raises kInvalidGroupElement.
GroupElement Reencrypt(const GroupScalar& k, std::span<const uint8_t> encoded);

// Uniform Fisher-Yates permutation in place.
template <typename T>
void ShuffleInPlace(std::vector<T>& items, RandomSource& rng) {
  for (size_t i = items.size(); i > 1; --i) {
    size_t j = static_cast<size_t>(rng.Uniform(i));
    std::swap(items[i - 1], items[j]);
  }
}

template <typename T>
std::vector<T> Shuffle(std::vector<T> items, RandomSource& rng) {
  ShuffleInPlace(items, rng);
  return items;
}

}  // namespace jingbing::cipher

#endif  // JINGBING_COMMUTATIVE_CIPHER_H_
