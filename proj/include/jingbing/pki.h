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

#ifndef JINGBING_PKI_H_
#define JINGBING_PKI_H_

#include <array>
#include <cstdint>
#include <memory>
#include <mutex>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "jingbing/bytes.h"
#include "jingbing/random.h"

// Minimal certificate authority for session authentication.
//
// Signatures are Ed25519 (deterministic, 128-bit security). Certificates are
// a compact TLV structure rather than X.509:
//
//   tag 0x01 version     (1 byte, = 1)
//   tag 0x02 subject     (2..32 bytes, [A-Z]+)
//   tag 0x03 public key  (32 bytes, Ed25519)
//   tag 0x04 serial      (8 bytes)
//   tag 0x05 not_before  (8 bytes, big-endian seconds since epoch)
//   tag 0x06 not_after   (8 bytes, big-endian seconds since epoch)
//   tag 0x07 signature   (64 bytes, issuer signature over tags 0x01..0x06)
//
// Each TLV is tag (1 byte) || length (2 bytes big-endian) || value, and the
// tags must appear exactly once in this order.
namespace jingbing::pki {

inline constexpr uint8_t kCertificateVersion = 1;
inline constexpr std::string_view kRootSubject = "ROOT";

using VerifyKey = std::array<uint8_t, 32>;
using Signature = std::array<uint8_t, 64>;
using Serial = std::array<uint8_t, 8>;

class SigningKey {
 public:
  static SigningKey Generate(RandomSource& rng);
  // 32-byte seed form, as stored in key files.
  static SigningKey FromSeed(std::span<const uint8_t> seed);

  const VerifyKey& verify_key() const { return verify_key_; }
  const std::array<uint8_t, 32>& seed() const { return seed_; }
  Signature Sign(std::span<const uint8_t> message) const;

 private:
  std::array<uint8_t, 32> seed_;
  std::array<uint8_t, 64> secret_;
  VerifyKey verify_key_;
};

bool VerifySignature(const VerifyKey& key, std::span<const uint8_t> message,
                     const Signature& sig);

struct Validity {
  int64_t not_before = 0;
  int64_t not_after = 0;

  bool operator==(const Validity&) const = default;
};

struct Certificate {
  uint8_t version = kCertificateVersion;
  std::string subject;
  VerifyKey subject_key{};
  Serial serial{};
  Validity validity;
  Signature signature{};

  // Encoding of tags 0x01..0x06: the bytes the issuer signs.
  Bytes SignedPortion() const;
  Bytes Serialize() const;
  // Throws kMalformedCertificate on any structural defect.
  static Certificate Parse(std::span<const uint8_t> bytes);

  bool operator==(const Certificate&) const = default;
};

// Subjects are 2..32 upper-case ASCII letters (state codes, or ROOT).
bool IsValidSubject(std::string_view subject);

// Returns the certificate subject iff its signature verifies under root's
// key and not_before <= now <= not_after. Throws kBadSignature, kExpired or
// kNotYetValid.
std::string VerifyCertificate(const Certificate& root, const Certificate& cert,
                              int64_t now);

class CertificateAuthority {
 public:
  // Fresh CA with a self-signed ROOT certificate.
  static CertificateAuthority Init(RandomSource& rng, const Validity& validity);

  CertificateAuthority(SigningKey key, Certificate root);

  const Certificate& root() const { return root_; }
  const SigningKey& key() const { return key_; }

  // Throws kInvalidSubject or kInvalidValidity. Serials are unique within
  // this instance; issuance is serialized.
  Certificate Issue(std::string_view subject, const VerifyKey& subject_key,
                    const Validity& validity, RandomSource& rng) const;

 private:
  struct IssuanceState {
    std::mutex mu;
    std::set<Serial> serials;
  };

  SigningKey key_;
  Certificate root_;
  std::shared_ptr<IssuanceState> issuance_;
};

// Party credentials: certificate plus matching secret key.
struct Identity {
  Certificate certificate;
  SigningKey key;
};

// PEM-style armor: "-----BEGIN JINGBING <LABEL>-----", base64 lines of 64
// characters, "-----END JINGBING <LABEL>-----".
inline constexpr std::string_view kCertLabel = "CERT";
inline constexpr std::string_view kSecretKeyLabel = "SECRET KEY";
std::string Armor(std::string_view label, std::span<const uint8_t> bytes);
Bytes Dearmor(std::string_view label, std::string_view text);

// File helpers. Secret keys are written with mode 0600.
void WriteCertificateFile(const std::string& path, const Certificate& cert);
Certificate ReadCertificateFile(const std::string& path);
void WriteSecretKeyFile(const std::string& path, const SigningKey& key);
SigningKey ReadSecretKeyFile(const std::string& path);

}  // namespace jingbing::pki

#endif  // JINGBING_PKI_H_
