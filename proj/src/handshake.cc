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

#include "jingbing/handshake.h"

#include "jingbing/error.h"

namespace jingbing::pki {

namespace {

using transport::Frame;
using transport::MessageType;

constexpr std::string_view kSessionContext = "JINGBING-SESSION-V1";

std::string_view RoleLabel(Role role) {
  return role == Role::kClient ? "JINGBING-AUTH-V1 client"
                               : "JINGBING-AUTH-V1 server";
}

[[noreturn]] void Abort(transport::FrameChannel& channel,
                        const std::string& reason) {
  channel.Close();
  Fail(ErrorCode::kHandshakeFailed, reason);
}

Frame ReceiveExpecting(transport::FrameChannel& channel, MessageType type) {
  Frame f;
  try {
    f = channel.Receive();
  } catch (const Error& e) {
    Abort(channel, std::string("peer aborted handshake: ") + e.what());
  }
  if (f.type != type) Abort(channel, "unexpected frame during handshake");
  return f;
}

}  // namespace

Bytes HelloMessage::Serialize() const {
  ByteWriter w;
  w.PutLengthPrefixed(certificate.Serialize());
  w.PutFixed(nonce);
  return w.Take();
}

HelloMessage HelloMessage::Parse(std::span<const uint8_t> payload) {
  ByteReader r(payload);
  HelloMessage m;
  m.certificate = Certificate::Parse(r.GetLengthPrefixed());
  m.nonce = r.GetArray<kNonceSize>();
  r.Finish();
  return m;
}

Bytes AuthProofMessage::Serialize() const {
  return Bytes(signature.begin(), signature.end());
}

AuthProofMessage AuthProofMessage::Parse(std::span<const uint8_t> payload) {
  ByteReader r(payload);
  AuthProofMessage m;
  m.signature = r.GetArray<64>();
  r.Finish();
  return m;
}

Bytes AuthProofSigningInput(Role signer, std::span<const uint8_t> own_nonce,
                            std::span<const uint8_t> peer_nonce,
                            const Certificate& peer_cert) {
  Bytes msg = ToBytes(RoleLabel(signer));
  msg.insert(msg.end(), own_nonce.begin(), own_nonce.end());
  msg.insert(msg.end(), peer_nonce.begin(), peer_nonce.end());
  const Digest h = Sha256(peer_cert.Serialize());
  msg.insert(msg.end(), h.begin(), h.end());
  return msg;
}

HandshakeResult MutualHandshake(Role role, const Identity& self,
                                const Certificate& root,
                                transport::FrameChannel& channel,
                                RandomSource& rng, int64_t now) {
  const Role peer_role = role == Role::kClient ? Role::kServer : Role::kClient;
  HelloMessage own_hello{self.certificate, {}};
  rng.Fill(own_hello.nonce);
  const Frame own_hello_frame{MessageType::kHello, own_hello.Serialize()};

  HelloMessage peer_hello;
  Frame peer_hello_frame;
  auto receive_hello = [&] {
    peer_hello_frame = ReceiveExpecting(channel, MessageType::kHello);
    try {
      peer_hello = HelloMessage::Parse(peer_hello_frame.payload);
      VerifyCertificate(root, peer_hello.certificate, now);
    } catch (const Error& e) {
      Abort(channel, std::string("peer certificate rejected: ") + e.what());
    }
  };

  if (role == Role::kClient) {
    channel.Send(own_hello_frame);
    receive_hello();
  } else {
    receive_hello();
    channel.Send(own_hello_frame);
  }

  AuthProofMessage own_proof{self.key.Sign(AuthProofSigningInput(
      role, own_hello.nonce, peer_hello.nonce, peer_hello.certificate))};
  const Frame own_proof_frame{MessageType::kAuthProof, own_proof.Serialize()};

  Frame peer_proof_frame;
  auto receive_proof = [&] {
    peer_proof_frame = ReceiveExpecting(channel, MessageType::kAuthProof);
    bool ok = false;
    try {
      const auto proof = AuthProofMessage::Parse(peer_proof_frame.payload);
      ok = VerifySignature(
          peer_hello.certificate.subject_key,
          AuthProofSigningInput(peer_role, peer_hello.nonce, own_hello.nonce,
                                self.certificate),
          proof.signature);
    } catch (const Error&) {
    }
    if (!ok) Abort(channel, "peer authentication proof does not verify");
  };

  if (role == Role::kClient) {
    channel.Send(own_proof_frame);
    receive_proof();
  } else {
    receive_proof();
    channel.Send(own_proof_frame);
  }

  const auto& client_nonce =
      role == Role::kClient ? own_hello.nonce : peer_hello.nonce;
  const auto& server_nonce =
      role == Role::kClient ? peer_hello.nonce : own_hello.nonce;
  Transcript transcript(SessionSeed(client_nonce, server_nonce));

  const Frame& client_hello =
      role == Role::kClient ? own_hello_frame : peer_hello_frame;
  const Frame& server_hello =
      role == Role::kClient ? peer_hello_frame : own_hello_frame;
  const Frame& client_proof =
      role == Role::kClient ? own_proof_frame : peer_proof_frame;
  const Frame& server_proof =
      role == Role::kClient ? peer_proof_frame : own_proof_frame;
  const Direction c2s = Direction::kClientToServer;
  const Direction s2c = Direction::kServerToClient;
  for (const auto& [dir, frame] :
       {std::pair{c2s, &client_hello}, std::pair{s2c, &server_hello},
        std::pair{c2s, &client_proof}, std::pair{s2c, &server_proof}}) {
    transcript.Append(dir, static_cast<uint8_t>(frame->type),
                      transport::EncodeFrame(*frame));
  }

  return HandshakeResult{peer_hello.certificate.subject,
                         peer_hello.certificate, std::move(transcript)};
}

Digest SessionSeed(std::span<const uint8_t, kNonceSize> client_nonce,
                   std::span<const uint8_t, kNonceSize> server_nonce) {
  Bytes seed_input = ToBytes(kSessionContext);
  seed_input.insert(seed_input.end(), client_nonce.begin(), client_nonce.end());
  seed_input.insert(seed_input.end(), server_nonce.begin(), server_nonce.end());
  return Sha256(seed_input);
}

Transcript ReplayTranscript(std::span<const RecordedFrame> log) {
  auto is_hello = [&](size_t i, Direction d) {
    return log.size() > i && log[i].direction == d &&
           log[i].frame.type == transport::MessageType::kHello;
  };
  if (!is_hello(0, Direction::kClientToServer) ||
      !is_hello(1, Direction::kServerToClient)) {
    Fail(ErrorCode::kMalformedMessage, "log does not open with both Hellos");
  }
  const auto client_hello = HelloMessage::Parse(log[0].frame.payload);
  const auto server_hello = HelloMessage::Parse(log[1].frame.payload);
  Transcript t(SessionSeed(client_hello.nonce, server_hello.nonce));
  for (const auto& entry : log) {
    if (entry.frame.type == transport::MessageType::kClose) break;
    t.Append(entry.direction, static_cast<uint8_t>(entry.frame.type),
             transport::EncodeFrame(entry.frame));
  }
  return t;
}

}  // namespace jingbing::pki
