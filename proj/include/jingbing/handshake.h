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

#ifndef JINGBING_HANDSHAKE_H_
#define JINGBING_HANDSHAKE_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>

#include "jingbing/frame.h"
#include "jingbing/pki.h"
#include "jingbing/random.h"
#include "jingbing/transcript.h"

// Application-layer mutual authentication, run before any protocol frame:
//
//   client -> server  Hello{cert, nonce_c}
//   server -> client  Hello{cert, nonce_s}        (after verifying client)
//   client -> server  AuthProof{sig_c}
//   server -> client  AuthProof{sig_s}            (after verifying sig_c)
//
//   sig_x = Sign(label_x || own nonce || peer nonce || SHA-256(peer cert))
//
// A party that rejects its peer closes the connection without sending
// anything further. On success both sides hold the same transcript, seeded
// with SHA-256(context || nonce_c || nonce_s) and holding the four frames.
namespace jingbing::pki {

enum class Role { kClient, kServer };

inline constexpr size_t kNonceSize = 32;

struct HelloMessage {
  Certificate certificate;
  std::array<uint8_t, kNonceSize> nonce{};

  bool operator==(const HelloMessage&) const = default;
  Bytes Serialize() const;
  static HelloMessage Parse(std::span<const uint8_t> payload);
};

struct AuthProofMessage {
  Signature signature{};

  bool operator==(const AuthProofMessage&) const = default;
  Bytes Serialize() const;
  static AuthProofMessage Parse(std::span<const uint8_t> payload);
};

// The bytes an AuthProof signature covers.
Bytes AuthProofSigningInput(Role signer, std::span<const uint8_t> own_nonce,
                            std::span<const uint8_t> peer_nonce,
                            const Certificate& peer_cert);

struct HandshakeResult {
  std::string peer_subject;
  Certificate peer_certificate;
  Transcript transcript;
};

// Throws kHandshakeFailed (and closes the channel) on any verification or
// framing failure.
HandshakeResult MutualHandshake(Role role, const Identity& self,
                                const Certificate& root,
                                transport::FrameChannel& channel,
                                RandomSource& rng, int64_t now);

// SHA-256(context || client nonce || server nonce).
Digest SessionSeed(std::span<const uint8_t, kNonceSize> client_nonce,
                   std::span<const uint8_t, kNonceSize> server_nonce);

struct RecordedFrame {
  Direction direction;
  transport::Frame frame;
};

// Rebuilds a session transcript from a wire log in order: the two Hellos
// seed it and every frame up to (not including) Close is appended. Lets a
// third party check transcript signatures against raw captured traffic.
// Throws kMalformedMessage if the log does not open with the two Hellos.
Transcript ReplayTranscript(std::span<const RecordedFrame> log);

}  // namespace jingbing::pki

#endif  // JINGBING_HANDSHAKE_H_
