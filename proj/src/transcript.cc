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

#include "jingbing/transcript.h"

#include "jingbing/error.h"

namespace jingbing::pki {

namespace {

constexpr std::string_view kTranscriptContext = "JINGBING-TRANSCRIPT-V1";

Bytes SignedMessage(const Transcript& t) {
  Bytes msg = ToBytes(kTranscriptContext);
  msg.insert(msg.end(), t.running_hash().begin(), t.running_hash().end());
  return msg;
}

void PutTlv(ByteWriter& w, uint8_t tag, std::span<const uint8_t> value) {
  w.PutU8(tag);
  w.PutU16(static_cast<uint16_t>(value.size()));
  w.PutFixed(value);
}

}  // namespace

Transcript::Transcript(const Digest& session_seed)
    : seed_(session_seed), running_(Sha256(session_seed)) {}

void Transcript::Append(Direction direction, uint8_t message_type,
                        std::span<const uint8_t> frame_bytes) {
  AppendHashed({direction, message_type, Sha256(frame_bytes)});
}

void Transcript::AppendHashed(const TranscriptEntry& entry) {
  Bytes buf(running_.begin(), running_.end());
  buf.push_back(static_cast<uint8_t>(entry.direction));
  buf.push_back(entry.message_type);
  buf.insert(buf.end(), entry.message_hash.begin(), entry.message_hash.end());
  running_ = Sha256(buf);
  entries_.push_back(entry);
}

Signature FinalizeTranscript(const SigningKey& key, const Transcript& t) {
  return key.Sign(SignedMessage(t));
}

void VerifyTranscript(const Certificate& signer, const Transcript& t,
                      const Signature& sig) {
  if (!VerifySignature(signer.subject_key, SignedMessage(t), sig)) {
    Fail(ErrorCode::kBadSignature,
         "transcript signature by " + signer.subject + " does not verify");
  }
}

Bytes TranscriptRecord::Serialize() const {
  ByteWriter w;
  PutTlv(w, 0x01, transcript.session_seed());
  PutTlv(w, 0x02, ToBytes(client_subject));
  PutTlv(w, 0x03, ToBytes(server_subject));
  for (const auto& e : transcript.entries()) {
    Bytes v;
    v.push_back(static_cast<uint8_t>(e.direction));
    v.push_back(e.message_type);
    v.insert(v.end(), e.message_hash.begin(), e.message_hash.end());
    PutTlv(w, 0x04, v);
  }
  PutTlv(w, 0x05, client_signature);
  PutTlv(w, 0x06, server_signature);
  return w.Take();
}

TranscriptRecord TranscriptRecord::Parse(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  auto expect = [&](uint8_t tag, size_t min_len, size_t max_len) {
    if (r.GetU8() != tag) Fail(ErrorCode::kMalformedMessage, "unexpected tag");
    const uint16_t len = r.GetU16();
    if (len < min_len || len > max_len) {
      Fail(ErrorCode::kMalformedMessage, "bad TLV length");
    }
    return r.GetFixed(len);
  };
  auto seed = expect(0x01, 32, 32);
  Digest d;
  std::copy(seed.begin(), seed.end(), d.begin());
  TranscriptRecord rec{Transcript(d), "", "", {}, {}};
  rec.client_subject = ToString(expect(0x02, 2, 32));
  rec.server_subject = ToString(expect(0x03, 2, 32));
  if (!IsValidSubject(rec.client_subject) ||
      !IsValidSubject(rec.server_subject)) {
    Fail(ErrorCode::kMalformedMessage, "bad subject in transcript");
  }
  while (r.remaining() > 0 && bytes[bytes.size() - r.remaining()] == 0x04) {
    auto v = expect(0x04, 34, 34);
    TranscriptEntry e;
    if (v[0] != 1 && v[0] != 2) {
      Fail(ErrorCode::kMalformedMessage, "bad direction in transcript");
    }
    e.direction = static_cast<Direction>(v[0]);
    e.message_type = v[1];
    std::copy(v.begin() + 2, v.end(), e.message_hash.begin());
    rec.transcript.AppendHashed(e);
  }
  auto cs = expect(0x05, 64, 64);
  std::copy(cs.begin(), cs.end(), rec.client_signature.begin());
  auto ss = expect(0x06, 64, 64);
  std::copy(ss.begin(), ss.end(), rec.server_signature.begin());
  r.Finish();
  return rec;
}

void VerifyTranscriptRecord(const TranscriptRecord& record,
                            const Certificate& client_cert,
                            const Certificate& server_cert) {
  if (record.client_subject != client_cert.subject ||
      record.server_subject != server_cert.subject) {
    Fail(ErrorCode::kBadSignature, "transcript names different parties");
  }
  VerifyTranscript(client_cert, record.transcript, record.client_signature);
  VerifyTranscript(server_cert, record.transcript, record.server_signature);
}

}  // namespace jingbing::pki
