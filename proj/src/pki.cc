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

#include "jingbing/pki.h"

#include <fcntl.h>
#include <sodium.h>
#include <sys/stat.h>
#include <unistd.h>

#include <fstream>
#include <sstream>

#include "jingbing/error.h"

namespace jingbing::pki {

namespace {

enum Tag : uint8_t {
  kTagVersion = 0x01,
  kTagSubject = 0x02,
  kTagPublicKey = 0x03,
  kTagSerial = 0x04,
  kTagNotBefore = 0x05,
  kTagNotAfter = 0x06,
  kTagSignature = 0x07,
};

void PutTlv(ByteWriter& w, uint8_t tag, std::span<const uint8_t> value) {
  w.PutU8(tag);
  w.PutU16(static_cast<uint16_t>(value.size()));
  w.PutFixed(value);
}

std::array<uint8_t, 8> BigEndian64(int64_t v) {
  std::array<uint8_t, 8> out;
  const auto u = static_cast<uint64_t>(v);
  for (int i = 0; i < 8; ++i) out[i] = static_cast<uint8_t>(u >> (56 - 8 * i));
  return out;
}

int64_t FromBigEndian64(std::span<const uint8_t> b) {
  uint64_t u = 0;
  for (uint8_t x : b) u = (u << 8) | x;
  return static_cast<int64_t>(u);
}

std::span<const uint8_t> GetTlv(ByteReader& r, uint8_t tag, size_t min_len,
                                size_t max_len) {
  if (r.GetU8() != tag) Fail(ErrorCode::kMalformedMessage, "unexpected tag");
  const uint16_t len = r.GetU16();
  if (len < min_len || len > max_len) {
    Fail(ErrorCode::kMalformedMessage, "bad TLV length");
  }
  return r.GetFixed(len);
}

std::string ReadWholeFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIoError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

SigningKey SigningKey::Generate(RandomSource& rng) {
  std::array<uint8_t, 32> seed;
  rng.Fill(seed);
  return FromSeed(seed);
}

SigningKey SigningKey::FromSeed(std::span<const uint8_t> seed) {
  EnsureCryptoInitialized();
  if (seed.size() != crypto_sign_SEEDBYTES) {
    Fail(ErrorCode::kInvalidArgument, "signing seed must be 32 bytes");
  }
  SigningKey k;
  std::copy(seed.begin(), seed.end(), k.seed_.begin());
  crypto_sign_seed_keypair(k.verify_key_.data(), k.secret_.data(),
                           k.seed_.data());
  return k;
}

Signature SigningKey::Sign(std::span<const uint8_t> message) const {
  Signature sig;
  crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(),
                       secret_.data());
  return sig;
}

bool VerifySignature(const VerifyKey& key, std::span<const uint8_t> message,
                     const Signature& sig) {
  EnsureCryptoInitialized();
  return crypto_sign_verify_detached(sig.data(), message.data(),
                                     message.size(), key.data()) == 0;
}

bool IsValidSubject(std::string_view subject) {
  if (subject.size() < 2 || subject.size() > 32) return false;
  for (char c : subject) {
    if (c < 'A' || c > 'Z') return false;
  }
  return true;
}

Bytes Certificate::SignedPortion() const {
  ByteWriter w;
  const uint8_t v = version;
  PutTlv(w, kTagVersion, std::span(&v, 1));
  PutTlv(w, kTagSubject, ToBytes(subject));
  PutTlv(w, kTagPublicKey, subject_key);
  PutTlv(w, kTagSerial, serial);
  PutTlv(w, kTagNotBefore, BigEndian64(validity.not_before));
  PutTlv(w, kTagNotAfter, BigEndian64(validity.not_after));
  return w.Take();
}

Bytes Certificate::Serialize() const {
  ByteWriter w;
  w.PutFixed(SignedPortion());
  PutTlv(w, kTagSignature, signature);
  return w.Take();
}

Certificate Certificate::Parse(std::span<const uint8_t> bytes) {
  try {
    ByteReader r(bytes);
    Certificate c;
    c.version = GetTlv(r, kTagVersion, 1, 1)[0];
    if (c.version != kCertificateVersion) {
      Fail(ErrorCode::kMalformedMessage, "unsupported certificate version");
    }
    c.subject = ToString(GetTlv(r, kTagSubject, 2, 32));
    auto pk = GetTlv(r, kTagPublicKey, 32, 32);
    std::copy(pk.begin(), pk.end(), c.subject_key.begin());
    auto serial = GetTlv(r, kTagSerial, 8, 8);
    std::copy(serial.begin(), serial.end(), c.serial.begin());
    c.validity.not_before = FromBigEndian64(GetTlv(r, kTagNotBefore, 8, 8));
    c.validity.not_after = FromBigEndian64(GetTlv(r, kTagNotAfter, 8, 8));
    auto sig = GetTlv(r, kTagSignature, 64, 64);
    std::copy(sig.begin(), sig.end(), c.signature.begin());
    r.Finish();
    if (!IsValidSubject(c.subject) ||
        c.validity.not_before >= c.validity.not_after) {
      Fail(ErrorCode::kMalformedMessage, "certificate fields out of range");
    }
    return c;
  } catch (const Error& e) {
    Fail(ErrorCode::kMalformedCertificate, e.what());
  }
}

std::string VerifyCertificate(const Certificate& root, const Certificate& cert,
                              int64_t now) {
  if (!VerifySignature(root.subject_key, cert.SignedPortion(),
                       cert.signature)) {
    Fail(ErrorCode::kBadSignature,
         "certificate for " + cert.subject + " not signed by root");
  }
  if (now < cert.validity.not_before) {
    Fail(ErrorCode::kNotYetValid, "certificate not yet valid");
  }
  if (now > cert.validity.not_after) {
    Fail(ErrorCode::kExpired, "certificate expired");
  }
  return cert.subject;
}

CertificateAuthority::CertificateAuthority(SigningKey key, Certificate root)
    : key_(std::move(key)),
      root_(std::move(root)),
      issuance_(std::make_shared<IssuanceState>()) {
  if (root_.subject_key != key_.verify_key()) {
    Fail(ErrorCode::kInvalidArgument, "CA key does not match root certificate");
  }
  issuance_->serials.insert(root_.serial);
}

CertificateAuthority CertificateAuthority::Init(RandomSource& rng,
                                                const Validity& validity) {
  if (validity.not_before >= validity.not_after) {
    Fail(ErrorCode::kInvalidValidity, "empty validity window");
  }
  SigningKey key = SigningKey::Generate(rng);
  Certificate root;
  root.subject = std::string(kRootSubject);
  root.subject_key = key.verify_key();
  rng.Fill(root.serial);
  root.validity = validity;
  root.signature = key.Sign(root.SignedPortion());
  return CertificateAuthority(std::move(key), std::move(root));
}

Certificate CertificateAuthority::Issue(std::string_view subject,
                                        const VerifyKey& subject_key,
                                        const Validity& validity,
                                        RandomSource& rng) const {
  if (!IsValidSubject(subject)) {
    Fail(ErrorCode::kInvalidSubject,
         "subject must match [A-Z]{2,32}: '" + std::string(subject) + "'");
  }
  if (validity.not_before >= validity.not_after) {
    Fail(ErrorCode::kInvalidValidity, "not_after must follow not_before");
  }
  Certificate cert;
  cert.subject = std::string(subject);
  cert.subject_key = subject_key;
  cert.validity = validity;
  {
    std::lock_guard<std::mutex> lock(issuance_->mu);
    do {
      rng.Fill(cert.serial);
    } while (!issuance_->serials.insert(cert.serial).second);
  }
  cert.signature = key_.Sign(cert.SignedPortion());
  return cert;
}

std::string Armor(std::string_view label, std::span<const uint8_t> bytes) {
  EnsureCryptoInitialized();
  const size_t cap =
      sodium_base64_ENCODED_LEN(bytes.size(), sodium_base64_VARIANT_ORIGINAL);
  std::string b64(cap, '\0');
  sodium_bin2base64(b64.data(), cap, bytes.data(), bytes.size(),
                    sodium_base64_VARIANT_ORIGINAL);
  b64.resize(cap - 1);
  std::string out = "-----BEGIN JINGBING " + std::string(label) + "-----\n";
  for (size_t i = 0; i < b64.size(); i += 64) {
    out += b64.substr(i, 64);
    out += '\n';
  }
  out += "-----END JINGBING " + std::string(label) + "-----\n";
  return out;
}

Bytes Dearmor(std::string_view label, std::string_view text) {
  EnsureCryptoInitialized();
  const std::string begin = "-----BEGIN JINGBING " + std::string(label) + "-----";
  const std::string end = "-----END JINGBING " + std::string(label) + "-----";
  const size_t b = text.find(begin);
  const size_t e = text.find(end);
  if (b == std::string_view::npos || e == std::string_view::npos || e < b) {
    Fail(ErrorCode::kMalformedCertificate, "missing armor lines");
  }
  std::string body;
  for (char c : text.substr(b + begin.size(), e - b - begin.size())) {
    if (c != '\n' && c != '\r') body.push_back(c);
  }
  Bytes out(body.size());
  size_t len = 0;
  if (sodium_base642bin(out.data(), out.size(), body.data(), body.size(),
                        nullptr, &len, nullptr,
                        sodium_base64_VARIANT_ORIGINAL) != 0) {
    Fail(ErrorCode::kMalformedCertificate, "bad base64 in armor");
  }
  out.resize(len);
  return out;
}

void WriteCertificateFile(const std::string& path, const Certificate& cert) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << Armor(kCertLabel, cert.Serialize());
  if (!out) Fail(ErrorCode::kIoError, "cannot write " + path);
}

Certificate ReadCertificateFile(const std::string& path) {
  return Certificate::Parse(Dearmor(kCertLabel, ReadWholeFile(path)));
}

void WriteSecretKeyFile(const std::string& path, const SigningKey& key) {
  const std::string text = Armor(kSecretKeyLabel, key.seed());
  int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0600);
  if (fd < 0) Fail(ErrorCode::kIoError, "cannot write " + path);
  ::fchmod(fd, 0600);
  const ssize_t n = ::write(fd, text.data(), text.size());
  ::close(fd);
  if (n != static_cast<ssize_t>(text.size())) {
    Fail(ErrorCode::kIoError, "short write to " + path);
  }
}

SigningKey ReadSecretKeyFile(const std::string& path) {
  Bytes seed = Dearmor(kSecretKeyLabel, ReadWholeFile(path));
  if (seed.size() != crypto_sign_SEEDBYTES) {
    Fail(ErrorCode::kMalformedCertificate, "secret key has wrong length");
  }
  return SigningKey::FromSeed(seed);
}

}  // namespace jingbing::pki
