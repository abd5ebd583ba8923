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

#ifndef JINGBING_MESSAGES_H_
#define JINGBING_MESSAGES_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "jingbing/bytes.h"
#include "jingbing/commutative_cipher.h"
#include "jingbing/error.h"
#include "jingbing/frame.h"
#include "jingbing/handshake.h"

// Payload schemas of the session messages. Encoding rules: fields in
// declaration order; integers fixed-width big-endian; byte strings and lists
// carry a 4-byte big-endian length/count; optional fields are preceded by a
// 1-byte presence flag (0 or 1). Group elements are their fixed 32-byte
// canonical encoding. Decoding rejects trailing bytes.
//
//   StartRequest       u16 version | u8 column_count | u64 value_bound |
//                      u32 n | n * (u8 column, u8 operator) |
//                      u8 has_paillier [| bytes paillier_pk] |
//                      u8 has_bfv [| bytes bfv_pk | bytes bfv_relin_key]
//   ServerShuffledSet  u32 n | n * element
//   ClientRoundOne     u32 n | n * element |
//                      u32 rows | rows * (element | u32 k | k * value)
//   ServerResult       u64 cardinality | u32 k | k * value
//   Close              64-byte client transcript signature
//   Error              u16 reason code
//
// where value = u8 scheme | bytes ciphertext.
namespace jingbing::protocol {

inline constexpr uint16_t kProtocolVersion = 1;

enum class Operator : uint8_t {
  kSum = 1,
  kSumOfSquares = 2,
};

std::string_view OperatorName(Operator op);  // "sum" / "sumsq"

struct AggregationEntry {
  uint8_t column = 0;
  Operator op = Operator::kSum;

  auto operator<=>(const AggregationEntry&) const = default;
};

enum class Scheme : uint8_t {
  kPaillier = 1,
  kBfv = 2,
};

// Operator -> scheme mapping is fixed: SUM uses Paillier, SUM_OF_SQUARES
// uses BFV.
Scheme SchemeFor(Operator op);

// A value field on the wire: always a ciphertext, tagged with its scheme.
struct EncryptedValue {
  Scheme scheme = Scheme::kPaillier;
  Bytes ciphertext;

  bool operator==(const EncryptedValue&) const = default;
};

struct BfvKeyMaterial {
  Bytes public_key;
  Bytes relin_key;

  bool operator==(const BfvKeyMaterial&) const = default;
};

struct StartRequest {
  uint16_t version = kProtocolVersion;
  uint8_t column_count = 0;
  uint64_t value_bound = 0;
  std::vector<AggregationEntry> spec;
  std::optional<Bytes> paillier_public_key;
  std::optional<BfvKeyMaterial> bfv_keys;

  bool operator==(const StartRequest&) const = default;
};

struct ServerShuffledSet {
  std::vector<cipher::GroupElement> elements;

  bool operator==(const ServerShuffledSet&) const = default;
};

struct ClientRow {
  cipher::GroupElement element;
  std::vector<EncryptedValue> values;

  bool operator==(const ClientRow&) const = default;
};

struct ClientRoundOne {
  std::vector<cipher::GroupElement> double_encrypted_server;
  std::vector<ClientRow> rows;

  bool operator==(const ClientRoundOne&) const = default;
};

struct ServerResult {
  uint64_t cardinality = 0;
  std::vector<EncryptedValue> aggregates;

  bool operator==(const ServerResult&) const = default;
};

struct CloseMessage {
  pki::Signature client_signature{};

  bool operator==(const CloseMessage&) const = default;
};

// Error frames carry a code from this fixed registry, never free text.
enum class ReasonCode : uint16_t {
  kHandshakeFailed = 0x0001,
  kUnsupportedVersion = 0x0002,
  kBoundExceeded = 0x0010,
  kTooManyRecords = 0x0011,
  kColumnMismatch = 0x0012,
  kCapacityExceeded = 0x0013,
  kPhaseViolation = 0x0020,
  kMalformedMessage = 0x0021,
  kFrameTooLarge = 0x0022,
  kUnknownMessageType = 0x0023,
  kProtocolViolation = 0x0024,
  kInternal = 0x00FF,
};

std::string_view ReasonName(ReasonCode code);
ReasonCode ReasonFor(ErrorCode code);

struct ErrorMessage {
  ReasonCode reason = ReasonCode::kInternal;

  bool operator==(const ErrorMessage&) const = default;
};

using Message =
    std::variant<pki::HelloMessage, pki::AuthProofMessage, StartRequest,
                 ServerShuffledSet, ClientRoundOne, ServerResult, CloseMessage,
                 ErrorMessage>;

transport::MessageType TypeOf(const Message& m);
Bytes EncodePayload(const Message& m);
// Throws kMalformedMessage on any inconsistency, including trailing bytes.
Message DecodePayload(transport::MessageType type,
                      std::span<const uint8_t> payload);

inline transport::Frame ToFrame(const Message& m) {
  return transport::Frame{TypeOf(m), EncodePayload(m)};
}

}  // namespace jingbing::protocol

#endif  // JINGBING_MESSAGES_H_
