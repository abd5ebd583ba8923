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

#include <thread>

#include <gtest/gtest.h>

#include "jingbing/frame.h"
#include "jingbing/handshake.h"
#include "jingbing/transcript.h"
#include "test_util.h"

namespace jingbing::pki {
namespace {

using ::jingbing::testing::TestPki;
using transport::FlowDirection;
using transport::Frame;
using transport::MemoryChannel;
using transport::MessageType;
using transport::ObservedChannel;

constexpr int64_t kNow = 1790000000;

Digest SeedOf(uint8_t b) {
  Digest d;
  d.fill(b);
  return d;
}

Transcript SampleTranscript() {
  Transcript t(SeedOf(7));
  t.Append(Direction::kClientToServer, 0x10, ToBytes("start"));
  t.Append(Direction::kServerToClient, 0x11, ToBytes("shuffled"));
  t.Append(Direction::kClientToServer, 0x12, ToBytes("round one"));
  return t;
}

TEST(Transcript, EmptyRunningHashIsHashOfSeed) {
  const Transcript t(SeedOf(1));
  EXPECT_EQ(t.running_hash(), Sha256(SeedOf(1)));
  EXPECT_TRUE(t.entries().empty());
}

TEST(Transcript, ChainRule) {
  Transcript t(SeedOf(2));
  const Bytes frame = ToBytes("payload");
  t.Append(Direction::kServerToClient, 0x13, frame);
  const Digest seed_hash = Sha256(SeedOf(2));
  Bytes expected_input(seed_hash.begin(), seed_hash.end());
  expected_input.push_back(2);
  expected_input.push_back(0x13);
  const Digest h = Sha256(frame);
  expected_input.insert(expected_input.end(), h.begin(), h.end());
  EXPECT_EQ(t.running_hash(), Sha256(expected_input));
}

TEST(Transcript, DeterministicAndSensitive) {
  EXPECT_EQ(SampleTranscript().running_hash(), SampleTranscript().running_hash());
  Transcript flipped(SeedOf(7));
  flipped.Append(Direction::kClientToServer, 0x10, ToBytes("starT"));
  flipped.Append(Direction::kServerToClient, 0x11, ToBytes("shuffled"));
  flipped.Append(Direction::kClientToServer, 0x12, ToBytes("round one"));
  EXPECT_NE(flipped.running_hash(), SampleTranscript().running_hash());
}

TEST(Transcript, FinalizeVerifyAndTamper) {
  SeededRandom rng(1);
  const auto pki = TestPki::Create(rng, kNow);
  const auto alice = pki.Issue("NY", rng);
  const auto bob = pki.Issue("CA", rng);
  const auto t = SampleTranscript();
  const auto sig = FinalizeTranscript(alice.key, t);
  EXPECT_NO_THROW(VerifyTranscript(alice.certificate, t, sig));
  EXPECT_ERROR_CODE(VerifyTranscript(bob.certificate, t, sig),
                    ErrorCode::kBadSignature);

  // Dropping the last entry.
  Transcript shorter(SeedOf(7));
  for (size_t i = 0; i + 1 < t.entries().size(); ++i) {
    shorter.AppendHashed(t.entries()[i]);
  }
  EXPECT_ERROR_CODE(VerifyTranscript(alice.certificate, shorter, sig),
                    ErrorCode::kBadSignature);
}

TEST(TranscriptRecord, RoundTripAndVerification) {
  SeededRandom rng(2);
  const auto pki = TestPki::Create(rng, kNow);
  const auto client = pki.Issue("CA", rng);
  const auto server = pki.Issue("NY", rng);
  const auto t = SampleTranscript();
  TranscriptRecord rec{t, "CA", "NY", FinalizeTranscript(client.key, t),
                       FinalizeTranscript(server.key, t)};
  const Bytes bytes = rec.Serialize();
  const auto parsed = TranscriptRecord::Parse(bytes);
  EXPECT_EQ(parsed.transcript.running_hash(), t.running_hash());
  EXPECT_EQ(parsed.Serialize(), bytes);
  EXPECT_NO_THROW(VerifyTranscriptRecord(parsed, client.certificate,
                                         server.certificate));
  EXPECT_ERROR_CODE(VerifyTranscriptRecord(parsed, server.certificate,
                                           client.certificate),
                    ErrorCode::kBadSignature);

  // Every single-byte mutation must be caught, by the parser or by the
  // signature check.
  for (size_t i = 0; i < bytes.size(); ++i) {
    Bytes m = bytes;
    m[i] ^= 0x01;
    bool rejected = false;
    try {
      VerifyTranscriptRecord(TranscriptRecord::Parse(m), client.certificate,
                             server.certificate);
    } catch (const Error&) {
      rejected = true;
    }
    ASSERT_TRUE(rejected) << "mutation at byte " << i << " accepted";
  }
}

struct HandshakeOutcome {
  std::optional<HandshakeResult> client;
  std::optional<HandshakeResult> server;
  std::optional<ErrorCode> client_error;
  std::optional<ErrorCode> server_error;
  std::vector<Frame> wire;  // frames seen by the server side, both directions
};

HandshakeOutcome RunHandshake(const Identity& client, const Identity& server,
                              const Certificate& client_root,
                              const Certificate& server_root,
                              int64_t now = kNow) {
  auto [c_end, s_end] = MemoryChannel::Pair();
  HandshakeOutcome out;
  std::mutex mu;
  ObservedChannel observed(*s_end, [&](FlowDirection, const Frame& f) {
    std::lock_guard<std::mutex> lock(mu);
    out.wire.push_back(f);
  });
  std::thread server_thread([&] {
    SeededRandom rng(11);
    try {
      out.server = MutualHandshake(Role::kServer, server, server_root,
                                   observed, rng, now);
    } catch (const Error& e) {
      out.server_error = e.code();
    }
  });
  SeededRandom rng(12);
  try {
    out.client = MutualHandshake(Role::kClient, client, client_root, *c_end,
                                 rng, now);
  } catch (const Error& e) {
    out.client_error = e.code();
  }
  server_thread.join();
  return out;
}

TEST(MutualHandshake, Succeeds) {
  SeededRandom rng(3);
  const auto pki = TestPki::Create(rng, kNow);
  const auto client = pki.Issue("CA", rng);
  const auto server = pki.Issue("NY", rng);
  auto out = RunHandshake(client, server, pki.ca.root(), pki.ca.root());
  ASSERT_TRUE(out.client && out.server);
  EXPECT_EQ(out.client->peer_subject, "NY");
  EXPECT_EQ(out.server->peer_subject, "CA");
  EXPECT_EQ(out.client->transcript.running_hash(),
            out.server->transcript.running_hash());
  EXPECT_EQ(out.client->transcript.entries().size(), 4u);
  ASSERT_EQ(out.wire.size(), 4u);
  EXPECT_EQ(out.wire[0].type, MessageType::kHello);
  EXPECT_EQ(out.wire[1].type, MessageType::kHello);
  EXPECT_EQ(out.wire[2].type, MessageType::kAuthProof);
  EXPECT_EQ(out.wire[3].type, MessageType::kAuthProof);
}

TEST(ReplayTranscript, RebuildsHandshakeTranscriptFromWire) {
  SeededRandom rng(14);
  const auto pki = TestPki::Create(rng, kNow);
  auto out = RunHandshake(pki.Issue("CA", rng), pki.Issue("NY", rng),
                          pki.ca.root(), pki.ca.root());
  ASSERT_TRUE(out.server);
  std::vector<RecordedFrame> log;
  for (size_t i = 0; i < out.wire.size(); ++i) {
    log.push_back({i % 2 == 0 ? Direction::kClientToServer
                              : Direction::kServerToClient,
                   out.wire[i]});
  }
  EXPECT_EQ(ReplayTranscript(log).running_hash(),
            out.server->transcript.running_hash());
  // Close frames end the replay.
  log.push_back({Direction::kClientToServer,
                 Frame{MessageType::kClose, Bytes(64)}});
  EXPECT_EQ(ReplayTranscript(log).running_hash(),
            out.server->transcript.running_hash());
  std::swap(log[0], log[1]);
  EXPECT_ERROR_CODE(ReplayTranscript(log), ErrorCode::kMalformedMessage);
  EXPECT_ERROR_CODE(ReplayTranscript({}), ErrorCode::kMalformedMessage);
}

TEST(MutualHandshake, ForeignClientRejectedWithNoFurtherFrames) {
  SeededRandom rng(4);
  const auto pki = TestPki::Create(rng, kNow);
  const auto foreign = TestPki::Create(rng, kNow);
  const auto client = foreign.Issue("CA", rng);
  const auto server = pki.Issue("NY", rng);
  auto out = RunHandshake(client, server, pki.ca.root(), pki.ca.root());
  EXPECT_EQ(out.server_error, ErrorCode::kHandshakeFailed);
  EXPECT_EQ(out.client_error, ErrorCode::kHandshakeFailed);
  ASSERT_EQ(out.wire.size(), 1u);  // only the client's Hello
  EXPECT_EQ(out.wire[0].type, MessageType::kHello);
}

TEST(MutualHandshake, ForeignServerRejectedByClient) {
  SeededRandom rng(5);
  const auto pki = TestPki::Create(rng, kNow);
  const auto foreign = TestPki::Create(rng, kNow);
  const auto client = pki.Issue("CA", rng);
  const auto server = foreign.Issue("NY", rng);
  auto out = RunHandshake(client, server, pki.ca.root(), foreign.ca.root());
  EXPECT_EQ(out.client_error, ErrorCode::kHandshakeFailed);
  EXPECT_TRUE(out.server_error.has_value());
  for (const auto& f : out.wire) {
    EXPECT_LT(static_cast<int>(f.type), 0x10);
  }
}

TEST(MutualHandshake, ExpiredClientRejected) {
  SeededRandom rng(6);
  const auto pki = TestPki::Create(rng, kNow);
  const auto client =
      pki.IssueWithValidity("CA", {kNow - 7200, kNow - 3600}, rng);
  const auto server = pki.Issue("NY", rng);
  auto out = RunHandshake(client, server, pki.ca.root(), pki.ca.root());
  EXPECT_EQ(out.server_error, ErrorCode::kHandshakeFailed);
  EXPECT_EQ(out.client_error, ErrorCode::kHandshakeFailed);
  EXPECT_EQ(out.wire.size(), 1u);
}

// A client holding a valid certificate but the wrong secret key cannot
// produce the AuthProof.
TEST(MutualHandshake, WrongKeyRejected) {
  SeededRandom rng(7);
  const auto pki = TestPki::Create(rng, kNow);
  auto client = pki.Issue("CA", rng);
  client.key = SigningKey::Generate(rng);
  const auto server = pki.Issue("NY", rng);
  auto out = RunHandshake(client, server, pki.ca.root(), pki.ca.root());
  EXPECT_EQ(out.server_error, ErrorCode::kHandshakeFailed);
  EXPECT_EQ(out.client_error, ErrorCode::kHandshakeFailed);
  EXPECT_EQ(out.wire.size(), 3u);  // Hello, Hello, client AuthProof
}

// An AuthProof recorded in one session does not verify in another because
// the nonces differ.
TEST(MutualHandshake, ReplayedAuthProofRejected) {
  SeededRandom rng(8);
  const auto pki = TestPki::Create(rng, kNow);
  const auto client = pki.Issue("CA", rng);
  const auto server = pki.Issue("NY", rng);
  auto first = RunHandshake(client, server, pki.ca.root(), pki.ca.root());
  ASSERT_TRUE(first.server);
  const Frame recorded_proof = first.wire[2];

  // Replay: attacker has the client's certificate but not its key; it sends
  // a fresh Hello and then the recorded AuthProof.
  auto [attacker, s_end] = MemoryChannel::Pair();
  std::optional<ErrorCode> server_error;
  std::thread server_thread([&] {
    SeededRandom srng(13);
    try {
      MutualHandshake(Role::kServer, server, pki.ca.root(), *s_end, srng, kNow);
    } catch (const Error& e) {
      server_error = e.code();
    }
  });
  HelloMessage hello{client.certificate, {}};
  rng.Fill(hello.nonce);
  attacker->Send(Frame{MessageType::kHello, hello.Serialize()});
  EXPECT_EQ(attacker->Receive().type, MessageType::kHello);
  attacker->Send(recorded_proof);
  EXPECT_ERROR_CODE(attacker->Receive(), ErrorCode::kUnexpectedEof);
  server_thread.join();
  EXPECT_EQ(server_error, ErrorCode::kHandshakeFailed);
}

TEST(HandshakeMessages, RoundTrip) {
  SeededRandom rng(9);
  const auto pki = TestPki::Create(rng, kNow);
  HelloMessage hello{pki.Issue("CA", rng).certificate, {}};
  rng.Fill(hello.nonce);
  EXPECT_EQ(HelloMessage::Parse(hello.Serialize()), hello);
  AuthProofMessage proof;
  rng.Fill(proof.signature);
  EXPECT_EQ(AuthProofMessage::Parse(proof.Serialize()), proof);
  Bytes bad = proof.Serialize();
  bad.push_back(0);
  EXPECT_ERROR_CODE(AuthProofMessage::Parse(bad), ErrorCode::kMalformedMessage);
}

}  // namespace
}  // namespace jingbing::pki
