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

#include "jingbing/random.h"

#include <sodium.h>

#include <mutex>

#include "jingbing/error.h"

namespace jingbing {

void EnsureCryptoInitialized() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (sodium_init() < 0) Fail(ErrorCode::kRngError, "sodium_init failed");
  });
}

uint64_t RandomSource::NextU64() {
  std::array<uint8_t, 8> buf;
  Fill(buf);
  uint64_t v = 0;
  for (uint8_t b : buf) v = (v << 8) | b;
  return v;
}

uint64_t RandomSource::Uniform(uint64_t bound) {
  if (bound == 0) Fail(ErrorCode::kInvalidArgument, "empty sampling range");
  unsigned __int128 wide =
      (static_cast<unsigned __int128>(NextU64()) << 64) | NextU64();
  return static_cast<uint64_t>(wide % bound);
}

SystemRandom::SystemRandom() { EnsureCryptoInitialized(); }

void SystemRandom::Fill(std::span<uint8_t> out) {
  randombytes_buf(out.data(), out.size());
}

SeededRandom::SeededRandom(uint64_t seed) {
  EnsureCryptoInitialized();
  std::array<uint8_t, 8> le;
  for (int i = 0; i < 8; ++i) le[i] = static_cast<uint8_t>(seed >> (8 * i));
  crypto_generichash(key_.data(), key_.size(), le.data(), le.size(),
                     reinterpret_cast<const unsigned char*>("jingbing-seed-v1"),
                     16);
}

SeededRandom::SeededRandom(const std::array<uint8_t, 32>& key) : key_(key) {
  EnsureCryptoInitialized();
}

void SeededRandom::Fill(std::span<uint8_t> out) {
  // One fresh nonce per call keeps the stream position independent of how
  // callers chunk their requests within a call.
  std::array<uint8_t, crypto_stream_chacha20_ietf_NONCEBYTES> nonce{};
  for (int i = 0; i < 8; ++i) nonce[i] = static_cast<uint8_t>(counter_ >> (8 * i));
  ++counter_;
  crypto_stream_chacha20_ietf(out.data(), out.size(), nonce.data(),
                              key_.data());
}

}  // namespace jingbing
