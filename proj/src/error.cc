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

#include "jingbing/error.h"

namespace jingbing {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kRngError: return "RngError";
    case ErrorCode::kInvalidIdentifier: return "InvalidIdentifier";
    case ErrorCode::kInvalidGroupElement: return "InvalidGroupElement";
    case ErrorCode::kKeygenError: return "KeygenError";
    case ErrorCode::kPlaintextOutOfRange: return "PlaintextOutOfRange";
    case ErrorCode::kInvalidCiphertext: return "InvalidCiphertext";
    case ErrorCode::kKeyMismatch: return "KeyMismatch";
    case ErrorCode::kParamMismatch: return "ParamMismatch";
    case ErrorCode::kNoiseOverflow: return "NoiseOverflow";
    case ErrorCode::kInvalidSubject: return "InvalidSubject";
    case ErrorCode::kInvalidValidity: return "InvalidValidity";
    case ErrorCode::kBadSignature: return "BadSignature";
    case ErrorCode::kExpired: return "Expired";
    case ErrorCode::kNotYetValid: return "NotYetValid";
    case ErrorCode::kMalformedCertificate: return "MalformedCertificate";
    case ErrorCode::kHandshakeFailed: return "HandshakeFailed";
    case ErrorCode::kBoundExceeded: return "BoundExceeded";
    case ErrorCode::kTooManyRecords: return "TooManyRecords";
    case ErrorCode::kColumnMismatch: return "ColumnMismatch";
    case ErrorCode::kCapacityExceeded: return "CapacityExceeded";
    case ErrorCode::kUnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::kPhaseViolation: return "PhaseViolation";
    case ErrorCode::kMalformedMessage: return "MalformedMessage";
    case ErrorCode::kProtocolViolation: return "ProtocolViolation";
    case ErrorCode::kFrameTooLarge: return "FrameTooLarge";
    case ErrorCode::kUnexpectedEof: return "UnexpectedEof";
    case ErrorCode::kUnknownMessageType: return "UnknownMessageType";
    case ErrorCode::kConnectionError: return "ConnectionError";
    case ErrorCode::kPeerError: return "PeerError";
    case ErrorCode::kDuplicateIdentifier: return "DuplicateIdentifier";
    case ErrorCode::kNonIntegerValue: return "NonIntegerValue";
    case ErrorCode::kBadHeader: return "BadHeader";
    case ErrorCode::kInfeasibleParams: return "InfeasibleParams";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace jingbing
