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

#ifndef JINGBING_RANDOM_H_
#define JINGBING_RANDOM_H_

#include <array>
#include <cstdint>
#include <span>

namespace jingbing {

// Initializes libsodium once; safe to call repeatedly from any thread.
void EnsureCryptoInitialized();

// Source of uniformly random bytes. Every randomized operation in the
// library takes one explicitly so tests can substitute a seeded stream.
class RandomSource {
 public:
  virtual ~RandomSource() = default;

  virtual void Fill(std::span<uint8_t> out) = 0;

  uint64_t NextU64();
  // Uniform in [0, bound). Reduces 128 random bits modulo `bound`, so the
  // bias is below 2^-64 and no rejection loop is needed.
  uint64_t Uniform(uint64_t bound);
};

// Operating-system CSPRNG (libsodium randombytes).
class SystemRandom final : public RandomSource {
 public:
  SystemRandom();
  void Fill(std::span<uint8_t> out) override;
};

// Deterministic ChaCha20 keystream keyed by a 32-byte seed. For tests,
// dataset generation and golden vectors only.
class SeededRandom final : public RandomSource {
 public:
  explicit SeededRandom(uint64_t seed);
  explicit SeededRandom(const std::array<uint8_t, 32>& key);
  void Fill(std::span<uint8_t> out) override;

 private:
  std::array<uint8_t, 32> key_;
  uint64_t counter_ = 0;
};

}  // namespace jingbing

#endif  // JINGBING_RANDOM_H_
