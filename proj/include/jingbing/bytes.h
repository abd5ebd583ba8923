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

#ifndef JINGBING_BYTES_H_
#define JINGBING_BYTES_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "jingbing/error.h"

namespace jingbing {

using Bytes = std::vector<uint8_t>;
using Digest = std::array<uint8_t, 32>;

inline Bytes ToBytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

inline std::string ToString(std::span<const uint8_t> b) {
  return std::string(b.begin(), b.end());
}

std::string HexEncode(std::span<const uint8_t> bytes);
// Throws kInvalidArgument on odd length or non-hex characters.
Bytes HexDecode(std::string_view hex);

Digest Sha256(std::span<const uint8_t> data);

// Serializer for the canonical wire encoding: integers are fixed-width
// big-endian, variable-length byte strings carry a 4-byte big-endian length.
class ByteWriter {
 public:
  void PutU8(uint8_t v) { out_.push_back(v); }
  void PutU16(uint16_t v);
  void PutU32(uint32_t v);
  void PutU64(uint64_t v);
  void PutBool(bool v) { PutU8(v ? 1 : 0); }
  void PutFixed(std::span<const uint8_t> b) {
    out_.insert(out_.end(), b.begin(), b.end());
  }
  void PutLengthPrefixed(std::span<const uint8_t> b);

  const Bytes& bytes() const { return out_; }
  Bytes Take() { return std::move(out_); }

 private:
  Bytes out_;
};

// Reader counterpart. Every short read or inconsistency raises
// kMalformedMessage; Finish() rejects trailing bytes.
class ByteReader {
 public:
  explicit ByteReader(std::span<const uint8_t> in) : in_(in) {}

  uint8_t GetU8();
  uint16_t GetU16();
  uint32_t GetU32();
  uint64_t GetU64();
  bool GetBool();
  std::span<const uint8_t> GetFixed(size_t n);
  template <size_t N>
  std::array<uint8_t, N> GetArray() {
    auto s = GetFixed(N);
    std::array<uint8_t, N> out;
    std::copy(s.begin(), s.end(), out.begin());
    return out;
  }
  Bytes GetLengthPrefixed();
  // A 4-byte element count, sanity-checked against the bytes remaining given
  // the minimum encoded size of one element.
  uint32_t GetCount(size_t min_element_size);

  size_t remaining() const { return in_.size() - pos_; }
  void Finish() const;

 private:
  std::span<const uint8_t> in_;
  size_t pos_ = 0;
};

}  // namespace jingbing

#endif  // JINGBING_BYTES_H_
