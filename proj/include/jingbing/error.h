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

#ifndef JINGBING_ERROR_H_
#define JINGBING_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace jingbing {

// Every failure surfaced by the library carries one of these codes. Callers
// branch on the code; the message is diagnostic only.
enum class ErrorCode {
  kInvalidArgument,
  kRngError,
  // commutative cipher
  kInvalidIdentifier,
  kInvalidGroupElement,
  // homomorphic schemes
  kKeygenError,
  kPlaintextOutOfRange,
  kInvalidCiphertext,
  kKeyMismatch,
  kParamMismatch,
  kNoiseOverflow,
  // pki
  kInvalidSubject,
  kInvalidValidity,
  kBadSignature,
  kExpired,
  kNotYetValid,
  kMalformedCertificate,
  kHandshakeFailed,
  // protocol
  kBoundExceeded,
  kTooManyRecords,
  kColumnMismatch,
  kCapacityExceeded,
  kUnsupportedVersion,
  kPhaseViolation,
  kMalformedMessage,
  kProtocolViolation,
  // transport
  kFrameTooLarge,
  kUnexpectedEof,
  kUnknownMessageType,
  kConnectionError,
  kPeerError,
  // dataset / cli
  kDuplicateIdentifier,
  kNonIntegerValue,
  kBadHeader,
  kInfeasibleParams,
  kIoError,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace jingbing

#endif  // JINGBING_ERROR_H_
