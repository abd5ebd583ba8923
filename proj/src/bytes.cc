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

#include "jingbing/bytes.h"

#include <sodium.h>

namespace jingbing {

std::string HexEncode(std::span<const uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

namespace {
int HexValue(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}
}  // namespace

Bytes HexDecode(std::string_view hex) {
  if (hex.size() % 2 != 0) Fail(ErrorCode::kInvalidArgument, "odd hex length");
  Bytes out(hex.size() / 2);
  for (size_t i = 0; i < out.size(); ++i) {
    int hi = HexValue(hex[2 * i]);
    int lo = HexValue(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) Fail(ErrorCode::kInvalidArgument, "bad hex digit");
    out[i] = static_cast<uint8_t>((hi << 4) | lo);
  }
  return out;
}

Digest Sha256(std::span<const uint8_t> data) {
  Digest out;
  crypto_hash_sha256(out.data(), data.data(), data.size());
  return out;
}

void ByteWriter::PutU16(uint16_t v) {
  PutU8(static_cast<uint8_t>(v >> 8));
  PutU8(static_cast<uint8_t>(v));
}

void ByteWriter::PutU32(uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) {
    PutU8(static_cast<uint8_t>(v >> shift));
  }
}

void ByteWriter::PutU64(uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) {
    PutU8(static_cast<uint8_t>(v >> shift));
  }
}

void ByteWriter::PutLengthPrefixed(std::span<const uint8_t> b) {
  if (b.size() > UINT32_MAX) {
    Fail(ErrorCode::kInvalidArgument, "byte string too long to encode");
  }
  PutU32(static_cast<uint32_t>(b.size()));
  PutFixed(b);
}

std::span<const uint8_t> ByteReader::GetFixed(size_t n) {
  if (n > remaining()) Fail(ErrorCode::kMalformedMessage, "truncated payload");
  auto s = in_.subspan(pos_, n);
  pos_ += n;
  return s;
}

uint8_t ByteReader::GetU8() { return GetFixed(1)[0]; }

uint16_t ByteReader::GetU16() {
  auto s = GetFixed(2);
  return static_cast<uint16_t>((s[0] << 8) | s[1]);
}

uint32_t ByteReader::GetU32() {
  auto s = GetFixed(4);
  uint32_t v = 0;
  for (uint8_t b : s) v = (v << 8) | b;
  return v;
}

uint64_t ByteReader::GetU64() {
  auto s = GetFixed(8);
  uint64_t v = 0;
  for (uint8_t b : s) v = (v << 8) | b;
  return v;
}

bool ByteReader::GetBool() {
  uint8_t v = GetU8();
  if (v > 1) Fail(ErrorCode::kMalformedMessage, "presence flag not 0 or 1");
  return v == 1;
}

Bytes ByteReader::GetLengthPrefixed() {
  uint32_t n = GetU32();
  auto s = GetFixed(n);
  return Bytes(s.begin(), s.end());
}

uint32_t ByteReader::GetCount(size_t min_element_size) {
  uint32_t n = GetU32();
  if (min_element_size > 0 && n > remaining() / min_element_size) {
    Fail(ErrorCode::kMalformedMessage, "element count exceeds payload");
  }
  return n;
}

void ByteReader::Finish() const {
  if (remaining() != 0) {
    Fail(ErrorCode::kMalformedMessage, "trailing bytes after payload");
  }
}

}  // namespace jingbing
