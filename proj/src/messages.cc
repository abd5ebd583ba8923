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

#include "jingbing/messages.h"

namespace jingbing::protocol {

namespace {

using transport::MessageType;

constexpr size_t kElementSize = cipher::kGroupElementSize;

void PutElement(ByteWriter& w, const cipher::GroupElement& g) {
  w.PutFixed(g.bytes());
}

cipher::GroupElement GetElement(ByteReader& r) {
  try {
    return cipher::GroupElement::FromBytes(r.GetFixed(kElementSize));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kMalformedMessage) throw;
    Fail(ErrorCode::kMalformedMessage, "invalid group element on the wire");
  }
}

void PutValue(ByteWriter& w, const EncryptedValue& v) {
  w.PutU8(static_cast<uint8_t>(v.scheme));
  w.PutLengthPrefixed(v.ciphertext);
}

EncryptedValue GetValue(ByteReader& r) {
  EncryptedValue v;
  const uint8_t scheme = r.GetU8();
  if (scheme != static_cast<uint8_t>(Scheme::kPaillier) &&
      scheme != static_cast<uint8_t>(Scheme::kBfv)) {
    Fail(ErrorCode::kMalformedMessage, "unknown ciphertext scheme");
  }
  v.scheme = static_cast<Scheme>(scheme);
  v.ciphertext = r.GetLengthPrefixed();
  if (v.ciphertext.empty()) {
    Fail(ErrorCode::kMalformedMessage, "empty ciphertext");
  }
  return v;
}

Operator GetOperator(ByteReader& r) {
  const uint8_t op = r.GetU8();
  if (op != static_cast<uint8_t>(Operator::kSum) &&
      op != static_cast<uint8_t>(Operator::kSumOfSquares)) {
    Fail(ErrorCode::kMalformedMessage, "unknown operator");
  }
  return static_cast<Operator>(op);
}

struct Encoder {
  ByteWriter& w;

  void operator()(const pki::HelloMessage& m) { w.PutFixed(m.Serialize()); }
  void operator()(const pki::AuthProofMessage& m) { w.PutFixed(m.Serialize()); }

  void operator()(const StartRequest& m) {
    w.PutU16(m.version);
    w.PutU8(m.column_count);
    w.PutU64(m.value_bound);
    w.PutU32(static_cast<uint32_t>(m.spec.size()));
    for (const auto& e : m.spec) {
      w.PutU8(e.column);
      w.PutU8(static_cast<uint8_t>(e.op));
    }
    w.PutBool(m.paillier_public_key.has_value());
    if (m.paillier_public_key) w.PutLengthPrefixed(*m.paillier_public_key);
    w.PutBool(m.bfv_keys.has_value());
    if (m.bfv_keys) {
      w.PutLengthPrefixed(m.bfv_keys->public_key);
      w.PutLengthPrefixed(m.bfv_keys->relin_key);
    }
  }

  void operator()(const ServerShuffledSet& m) {
    w.PutU32(static_cast<uint32_t>(m.elements.size()));
    for (const auto& g : m.elements) PutElement(w, g);
  }

  void operator()(const ClientRoundOne& m) {
    w.PutU32(static_cast<uint32_t>(m.double_encrypted_server.size()));
    for (const auto& g : m.double_encrypted_server) PutElement(w, g);
    w.PutU32(static_cast<uint32_t>(m.rows.size()));
    for (const auto& row : m.rows) {
      PutElement(w, row.element);
      w.PutU32(static_cast<uint32_t>(row.values.size()));
      for (const auto& v : row.values) PutValue(w, v);
    }
  }

  void operator()(const ServerResult& m) {
    w.PutU64(m.cardinality);
    w.PutU32(static_cast<uint32_t>(m.aggregates.size()));
    for (const auto& v : m.aggregates) PutValue(w, v);
  }

  void operator()(const CloseMessage& m) { w.PutFixed(m.client_signature); }
  void operator()(const ErrorMessage& m) {
    w.PutU16(static_cast<uint16_t>(m.reason));
  }
};

// Minimum encoded sizes, used to bound declared counts before allocating.
constexpr size_t kMinValueSize = 1 + 4 + 1;
constexpr size_t kMinRowSize = kElementSize + 4;

Message DecodeChecked(MessageType type, ByteReader& r) {
  switch (type) {
    case MessageType::kHello:
      return pki::HelloMessage::Parse(r.GetFixed(r.remaining()));
    case MessageType::kAuthProof:
      return pki::AuthProofMessage::Parse(r.GetFixed(r.remaining()));
    case MessageType::kStartRequest: {
      StartRequest m;
      m.version = r.GetU16();
      m.column_count = r.GetU8();
      m.value_bound = r.GetU64();
      const uint32_t n = r.GetCount(2);
      for (uint32_t i = 0; i < n; ++i) {
        AggregationEntry e;
        e.column = r.GetU8();
        e.op = GetOperator(r);
        m.spec.push_back(e);
      }
      if (r.GetBool()) m.paillier_public_key = r.GetLengthPrefixed();
      if (r.GetBool()) {
        BfvKeyMaterial k;
        k.public_key = r.GetLengthPrefixed();
        k.relin_key = r.GetLengthPrefixed();
        m.bfv_keys = std::move(k);
      }
      return m;
    }
    case MessageType::kServerShuffledSet: {
      ServerShuffledSet m;
      const uint32_t n = r.GetCount(kElementSize);
      m.elements.reserve(n);
      for (uint32_t i = 0; i < n; ++i) m.elements.push_back(GetElement(r));
      return m;
    }
    case MessageType::kClientRoundOne: {
      ClientRoundOne m;
      const uint32_t n = r.GetCount(kElementSize);
      m.double_encrypted_server.reserve(n);
      for (uint32_t i = 0; i < n; ++i) {
        m.double_encrypted_server.push_back(GetElement(r));
      }
      const uint32_t rows = r.GetCount(kMinRowSize);
      m.rows.reserve(rows);
      for (uint32_t i = 0; i < rows; ++i) {
        ClientRow row{GetElement(r), {}};
        const uint32_t k = r.GetCount(kMinValueSize);
        for (uint32_t j = 0; j < k; ++j) row.values.push_back(GetValue(r));
        m.rows.push_back(std::move(row));
      }
      return m;
    }
    case MessageType::kServerResult: {
      ServerResult m;
      m.cardinality = r.GetU64();
      const uint32_t k = r.GetCount(kMinValueSize);
      for (uint32_t j = 0; j < k; ++j) m.aggregates.push_back(GetValue(r));
      return m;
    }
    case MessageType::kClose: {
      CloseMessage m;
      m.client_signature = r.GetArray<64>();
      return m;
    }
    case MessageType::kError: {
      const uint16_t code = r.GetU16();
      const auto reason = static_cast<ReasonCode>(code);
      if (ReasonName(reason) == "Unknown") {
        Fail(ErrorCode::kMalformedMessage, "unregistered reason code");
      }
      return ErrorMessage{reason};
    }
  }
  Fail(ErrorCode::kUnknownMessageType, "unknown message type");
}

}  // namespace

std::string_view OperatorName(Operator op) {
  return op == Operator::kSum ? "sum" : "sumsq";
}

Scheme SchemeFor(Operator op) {
  return op == Operator::kSum ? Scheme::kPaillier : Scheme::kBfv;
}

std::string_view ReasonName(ReasonCode code) {
  switch (code) {
    case ReasonCode::kHandshakeFailed: return "HandshakeFailed";
    case ReasonCode::kUnsupportedVersion: return "UnsupportedVersion";
    case ReasonCode::kBoundExceeded: return "BoundExceeded";
    case ReasonCode::kTooManyRecords: return "TooManyRecords";
    case ReasonCode::kColumnMismatch: return "ColumnMismatch";
    case ReasonCode::kCapacityExceeded: return "CapacityExceeded";
    case ReasonCode::kPhaseViolation: return "PhaseViolation";
    case ReasonCode::kMalformedMessage: return "MalformedMessage";
    case ReasonCode::kFrameTooLarge: return "FrameTooLarge";
    case ReasonCode::kUnknownMessageType: return "UnknownMessageType";
    case ReasonCode::kProtocolViolation: return "ProtocolViolation";
    case ReasonCode::kInternal: return "Internal";
  }
  return "Unknown";
}

ReasonCode ReasonFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kHandshakeFailed: return ReasonCode::kHandshakeFailed;
    case ErrorCode::kUnsupportedVersion: return ReasonCode::kUnsupportedVersion;
    case ErrorCode::kBoundExceeded: return ReasonCode::kBoundExceeded;
    case ErrorCode::kTooManyRecords: return ReasonCode::kTooManyRecords;
    case ErrorCode::kColumnMismatch: return ReasonCode::kColumnMismatch;
    case ErrorCode::kCapacityExceeded: return ReasonCode::kCapacityExceeded;
    case ErrorCode::kPhaseViolation: return ReasonCode::kPhaseViolation;
    case ErrorCode::kMalformedMessage:
    case ErrorCode::kUnexpectedEof: return ReasonCode::kMalformedMessage;
    case ErrorCode::kFrameTooLarge: return ReasonCode::kFrameTooLarge;
    case ErrorCode::kUnknownMessageType: return ReasonCode::kUnknownMessageType;
    case ErrorCode::kProtocolViolation:
    case ErrorCode::kBadSignature:
    case ErrorCode::kInvalidCiphertext:
    case ErrorCode::kKeyMismatch:
    case ErrorCode::kParamMismatch:
    case ErrorCode::kNoiseOverflow: return ReasonCode::kProtocolViolation;
    default: return ReasonCode::kInternal;
  }
}

transport::MessageType TypeOf(const Message& m) {
  static constexpr MessageType kTypes[] = {
      MessageType::kHello,           MessageType::kAuthProof,
      MessageType::kStartRequest,    MessageType::kServerShuffledSet,
      MessageType::kClientRoundOne,  MessageType::kServerResult,
      MessageType::kClose,           MessageType::kError,
  };
  return kTypes[m.index()];
}

Bytes EncodePayload(const Message& m) {
  ByteWriter w;
  std::visit(Encoder{w}, m);
  return w.Take();
}

Message DecodePayload(transport::MessageType type,
                      std::span<const uint8_t> payload) {
  try {
    ByteReader r(payload);
    Message m = DecodeChecked(type, r);
    r.Finish();
    return m;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kMalformedMessage ||
        e.code() == ErrorCode::kUnknownMessageType) {
      throw;
    }
    Fail(ErrorCode::kMalformedMessage, e.what());
  }
}

}  // namespace jingbing::protocol
