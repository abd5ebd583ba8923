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

#ifndef JINGBING_TRANSCRIPT_H_
#define JINGBING_TRANSCRIPT_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "jingbing/bytes.h"
#include "jingbing/pki.h"

// Append-only hash chain over every framed message of a session.
//
//   running_0 = SHA-256(session_seed)
//   running_i = SHA-256(running_{i-1} || direction || type || SHA-256(frame))
//
// Both parties build the same chain (directions are absolute), so one
// signature from each side over the final running hash proves what was
// exchanged.
namespace jingbing::pki {

enum class Direction : uint8_t {
  kClientToServer = 1,
  kServerToClient = 2,
};

struct TranscriptEntry {
  Direction direction;
  uint8_t message_type;
  Digest message_hash;

  bool operator==(const TranscriptEntry&) const = default;
};

class Transcript {
 public:
  explicit Transcript(const Digest& session_seed);

  void Append(Direction direction, uint8_t message_type,
              std::span<const uint8_t> frame_bytes);
  // Appends an entry whose message hash is already known.
  void AppendHashed(const TranscriptEntry& entry);

  const Digest& session_seed() const { return seed_; }
  const Digest& running_hash() const { return running_; }
  const std::vector<TranscriptEntry>& entries() const { return entries_; }

 private:
  Digest seed_;
  Digest running_;
  std::vector<TranscriptEntry> entries_;
};

Signature FinalizeTranscript(const SigningKey& key, const Transcript& t);
// Throws kBadSignature unless `sig` is the certificate holder's signature
// over this transcript's running hash.
void VerifyTranscript(const Certificate& signer, const Transcript& t,
                      const Signature& sig);

// On-disk record of one session, written by the server:
//
//   tag 0x01 session seed     (32 bytes)
//   tag 0x02 client subject
//   tag 0x03 server subject
//   tag 0x04 entry            (direction || type || hash, 34 bytes), repeated
//   tag 0x05 client signature (64 bytes)
//   tag 0x06 server signature (64 bytes)
//
// TLV layout as for certificates: tag (1) || length (2, big-endian) || value.
struct TranscriptRecord {
  Transcript transcript;
  std::string client_subject;
  std::string server_subject;
  Signature client_signature{};
  Signature server_signature{};

  Bytes Serialize() const;
  // Throws kMalformedMessage on structural defects.
  static TranscriptRecord Parse(std::span<const uint8_t> bytes);
};

// Checks both signatures; throws kBadSignature on any mismatch.
void VerifyTranscriptRecord(const TranscriptRecord& record,
                            const Certificate& client_cert,
                            const Certificate& server_cert);

}  // namespace jingbing::pki

#endif  // JINGBING_TRANSCRIPT_H_
