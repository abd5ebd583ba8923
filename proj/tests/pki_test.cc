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

#include <sys/stat.h>

#include <gtest/gtest.h>

#include "test_util.h"

namespace jingbing::pki {
namespace {

using ::jingbing::testing::MakeTempDir;
using ::jingbing::testing::TestPki;

constexpr int64_t kNow = 1790000000;

TEST(Ed25519, Rfc8032FirstVector) {
  const auto key = SigningKey::FromSeed(HexDecode(
      "9d61b19deffd5a60ba844af492ec2cc44449c5697b326919703bac031cae7f60"));
  EXPECT_EQ(HexEncode(key.verify_key()),
            "d75a980182b10ab7d54bfed3c964073a0ee172f3daa62325af021a68f707511a");
  const auto sig = key.Sign(Bytes{});
  EXPECT_EQ(HexEncode(sig),
            "e5564300c360ac729086e2cc806e828a84877f1eb8e5d974d873e06522490155"
            "5fb8821590a33bacc61e39701cf9b46bd25bf5f0595bbe24655141438e7a100b");
  EXPECT_TRUE(VerifySignature(key.verify_key(), Bytes{}, sig));
  EXPECT_FALSE(VerifySignature(key.verify_key(), Bytes{0}, sig));
}

TEST(Subject, Rules) {
  EXPECT_TRUE(IsValidSubject("CA"));
  EXPECT_TRUE(IsValidSubject("ROOT"));
  EXPECT_TRUE(IsValidSubject(std::string(32, 'Z')));
  EXPECT_FALSE(IsValidSubject(""));
  EXPECT_FALSE(IsValidSubject("C"));
  EXPECT_FALSE(IsValidSubject("ca"));
  EXPECT_FALSE(IsValidSubject("N Y"));
  EXPECT_FALSE(IsValidSubject(std::string(33, 'Z')));
}

TEST(CertificateAuthority, RootIsSelfSigned) {
  SeededRandom rng(1);
  const auto ca = CertificateAuthority::Init(rng, {kNow - 10, kNow + 1000});
  EXPECT_EQ(ca.root().subject, "ROOT");
  EXPECT_EQ(VerifyCertificate(ca.root(), ca.root(), kNow), "ROOT");
  const auto other = CertificateAuthority::Init(rng, {kNow - 10, kNow + 1000});
  EXPECT_NE(ca.root().subject_key, other.root().subject_key);
}

TEST(CertificateAuthority, IssueAndVerify) {
  SeededRandom rng(2);
  const auto pki = TestPki::Create(rng, kNow);
  const auto id = pki.Issue("CA", rng);
  EXPECT_EQ(VerifyCertificate(pki.ca.root(), id.certificate, kNow), "CA");
  EXPECT_EQ(id.certificate.subject_key, id.key.verify_key());
}

TEST(CertificateAuthority, IssueRejectsBadInput) {
  SeededRandom rng(3);
  const auto pki = TestPki::Create(rng, kNow);
  const auto key = SigningKey::Generate(rng);
  EXPECT_ERROR_CODE(pki.ca.Issue("", key.verify_key(), {kNow, kNow + 10}, rng),
                    ErrorCode::kInvalidSubject);
  EXPECT_ERROR_CODE(pki.ca.Issue("ny", key.verify_key(), {kNow, kNow + 10}, rng),
                    ErrorCode::kInvalidSubject);
  EXPECT_ERROR_CODE(pki.ca.Issue("NY", key.verify_key(), {kNow + 10, kNow}, rng),
                    ErrorCode::kInvalidValidity);
}

TEST(CertificateAuthority, SerialsUnique) {
  SeededRandom rng(4);
  const auto pki = TestPki::Create(rng, kNow);
  std::set<Serial> serials;
  for (int i = 0; i < 200; ++i) serials.insert(pki.Issue("NY", rng).certificate.serial);
  EXPECT_EQ(serials.size(), 200u);
}

TEST(VerifyCertificate, FailureModes) {
  SeededRandom rng(5);
  const auto pki = TestPki::Create(rng, kNow);
  const auto foreign = TestPki::Create(rng, kNow);
  const auto id = foreign.Issue("TX", rng);
  EXPECT_ERROR_CODE(VerifyCertificate(pki.ca.root(), id.certificate, kNow),
                    ErrorCode::kBadSignature);

  const auto window = pki.IssueWithValidity("NY", {kNow, kNow + 100}, rng);
  EXPECT_ERROR_CODE(VerifyCertificate(pki.ca.root(), window.certificate, kNow + 101),
                    ErrorCode::kExpired);
  EXPECT_ERROR_CODE(VerifyCertificate(pki.ca.root(), window.certificate, kNow - 1),
                    ErrorCode::kNotYetValid);
  EXPECT_EQ(VerifyCertificate(pki.ca.root(), window.certificate, kNow), "NY");
  EXPECT_EQ(VerifyCertificate(pki.ca.root(), window.certificate, kNow + 100), "NY");

  auto tampered = window.certificate;
  tampered.subject = "NJ";
  EXPECT_ERROR_CODE(VerifyCertificate(pki.ca.root(), tampered, kNow),
                    ErrorCode::kBadSignature);
}

TEST(Certificate, SerializationRoundTripAndStrictParse) {
  SeededRandom rng(6);
  const auto pki = TestPki::Create(rng, kNow);
  const auto cert = pki.Issue("MA", rng).certificate;
  const Bytes bytes = cert.Serialize();
  EXPECT_EQ(Certificate::Parse(bytes), cert);
  // Tag order fixed: the first field is the version TLV.
  EXPECT_EQ(bytes[0], 0x01);

  Bytes trailing = bytes;
  trailing.push_back(0);
  EXPECT_ERROR_CODE(Certificate::Parse(trailing), ErrorCode::kMalformedCertificate);
  Bytes truncated(bytes.begin(), bytes.end() - 1);
  EXPECT_ERROR_CODE(Certificate::Parse(truncated), ErrorCode::kMalformedCertificate);
  Bytes bad_tag = bytes;
  bad_tag[0] = 0x09;
  EXPECT_ERROR_CODE(Certificate::Parse(bad_tag), ErrorCode::kMalformedCertificate);
}

TEST(Armor, RoundTripAndFiles) {
  SeededRandom rng(7);
  const auto pki = TestPki::Create(rng, kNow);
  const auto id = pki.Issue("VT", rng);
  const std::string text = Armor(kCertLabel, id.certificate.Serialize());
  EXPECT_EQ(text.rfind("-----BEGIN JINGBING CERT-----\n", 0), 0u);
  EXPECT_NE(text.find("-----END JINGBING CERT-----"), std::string::npos);
  EXPECT_EQ(Dearmor(kCertLabel, text), id.certificate.Serialize());
  EXPECT_ERROR_CODE(Dearmor(kSecretKeyLabel, text), ErrorCode::kMalformedCertificate);

  const auto dir = MakeTempDir("pki");
  WriteCertificateFile((dir / "vt.cert").string(), id.certificate);
  WriteSecretKeyFile((dir / "vt.key").string(), id.key);
  EXPECT_EQ(ReadCertificateFile((dir / "vt.cert").string()), id.certificate);
  EXPECT_EQ(ReadSecretKeyFile((dir / "vt.key").string()).verify_key(),
            id.key.verify_key());
  struct stat st{};
  ASSERT_EQ(::stat((dir / "vt.key").c_str(), &st), 0);
  EXPECT_EQ(st.st_mode & 0777, 0600u);
  EXPECT_ERROR_CODE(ReadCertificateFile((dir / "missing.cert").string()),
                    ErrorCode::kIoError);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace jingbing::pki
