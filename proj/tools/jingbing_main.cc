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

// jingbing: certificate authority, dataset generation, and the two protocol
// roles.
//
//   jingbing ca init   --out-dir DIR
//   jingbing ca issue  --ca-dir DIR --subject NY --out-dir DIR
//   jingbing gendata   --seed 42 --size-a 100 --size-b 100 --intersection 20
//                      --columns 2 --bound 31 --out-dir DIR
//   jingbing server    --cert NY.cert --key NY.key --root root.cert
//                      --dataset server.csv [--listen HOST:PORT]
//   jingbing client    --cert CA.cert --key CA.key --root root.cert
//                      --dataset client.csv --op 0:sum --op 0:sumsq
//                      [--connect HOST:PORT]
//
// Exit codes: 0 success, 2 validation error, 3 handshake failure,
// 4 protocol error, 5 I/O error. Failures print one `error=... detail=...`
// line on stderr.

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "jingbing/dataset_io.h"
#include "jingbing/error.h"
#include "jingbing/pki.h"
#include "jingbing/protocol.h"
#include "jingbing/random.h"
#include "jingbing/service.h"

namespace {

namespace fs = std::filesystem;
using namespace jingbing;

constexpr int kExitValidation = 2;
constexpr int kExitHandshake = 3;
constexpr int kExitProtocol = 4;
constexpr int kExitIo = 5;

std::atomic<bool> g_stop{false};

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kInvalidIdentifier:
    case ErrorCode::kInvalidSubject:
    case ErrorCode::kInvalidValidity:
    case ErrorCode::kMalformedCertificate:
    case ErrorCode::kExpired:
    case ErrorCode::kNotYetValid:
    case ErrorCode::kBadSignature:
    case ErrorCode::kKeygenError:
    case ErrorCode::kBoundExceeded:
    case ErrorCode::kTooManyRecords:
    case ErrorCode::kColumnMismatch:
    case ErrorCode::kCapacityExceeded:
    case ErrorCode::kDuplicateIdentifier:
    case ErrorCode::kNonIntegerValue:
    case ErrorCode::kBadHeader:
    case ErrorCode::kInfeasibleParams:
      return kExitValidation;
    case ErrorCode::kHandshakeFailed:
      return kExitHandshake;
    case ErrorCode::kIoError:
    case ErrorCode::kConnectionError:
      return kExitIo;
    default:
      return kExitProtocol;
  }
}

// Keeps the detail on one line.
std::string OneLine(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

int ReportError(std::string_view name, const std::string& detail, int code) {
  std::cerr << "error=" << name << " detail=" << OneLine(detail) << std::endl;
  return code;
}

std::pair<std::string, uint16_t> ParseAddress(const std::string& text) {
  auto colon = text.rfind(':');
  if (colon == std::string::npos) {
    Fail(ErrorCode::kInvalidArgument, "address must be HOST:PORT");
  }
  std::string host = text.substr(0, colon);
  if (host.size() >= 2 && host.front() == '[' && host.back() == ']') {
    host = host.substr(1, host.size() - 2);
  }
  unsigned long port = 0;
  try {
    size_t used = 0;
    port = std::stoul(text.substr(colon + 1), &used);
    if (used != text.size() - colon - 1) throw std::invalid_argument("port");
  } catch (const std::exception&) {
    Fail(ErrorCode::kInvalidArgument, "bad port in '" + text + "'");
  }
  if (port > 65535) Fail(ErrorCode::kInvalidArgument, "port out of range");
  return {host, static_cast<uint16_t>(port)};
}

protocol::AggregationEntry ParseOp(const std::string& text) {
  auto colon = text.find(':');
  auto bad = [&] {
    Fail(ErrorCode::kInvalidArgument,
         "--op must be <col>:<sum|sumsq>, got '" + text + "'");
  };
  if (colon == std::string::npos || colon == 0) bad();
  std::string col = text.substr(0, colon);
  std::string op = text.substr(colon + 1);
  if (col.find_first_not_of("0123456789") != std::string::npos || col.size() > 2) {
    bad();
  }
  int c = std::stoi(col);
  if (c >= static_cast<int>(protocol::kMaxColumns)) {
    Fail(ErrorCode::kColumnMismatch, "column " + col + " out of range");
  }
  protocol::AggregationEntry entry{static_cast<uint8_t>(c),
                                   protocol::Operator::kSum};
  if (op == "sum") {
    entry.op = protocol::Operator::kSum;
  } else if (op == "sumsq") {
    entry.op = protocol::Operator::kSumOfSquares;
  } else {
    bad();
  }
  return entry;
}

protocol::Limits LimitsFor(const std::string& profile) {
  return profile == "paper" ? protocol::Limits::Paper()
                            : protocol::Limits::Default();
}

pki::Identity LoadIdentity(const std::string& cert_path,
                           const std::string& key_path) {
  pki::Identity id{pki::ReadCertificateFile(cert_path),
                   pki::ReadSecretKeyFile(key_path)};
  if (id.certificate.subject_key != id.key.verify_key()) {
    Fail(ErrorCode::kInvalidArgument, "key does not match certificate");
  }
  return id;
}

// Own credentials are checked before any network activity.
void CheckOwnCertificate(const pki::Identity& id, const pki::Certificate& root,
                         int64_t now) {
  pki::VerifyCertificate(root, id.certificate, now);
}

pki::Validity ValidityFrom(int64_t now, int days,
                           std::optional<int64_t> not_before,
                           std::optional<int64_t> not_after) {
  pki::Validity v{now - 60, now + int64_t{days} * 86400};
  if (not_before) v.not_before = *not_before;
  if (not_after) v.not_after = *not_after;
  return v;
}

// ------------------------------------------------------------- commands

struct CaInitArgs {
  std::string out_dir = ".";
  int days = 365;
};

int CaInit(const CaInitArgs& a) {
  SystemRandom rng;
  const int64_t now = service::SystemClock();
  auto ca = pki::CertificateAuthority::Init(
      rng, ValidityFrom(now, a.days, std::nullopt, std::nullopt));
  fs::create_directories(a.out_dir);
  const fs::path dir(a.out_dir);
  pki::WriteCertificateFile((dir / "root.cert").string(), ca.root());
  pki::WriteSecretKeyFile((dir / "root.key").string(), ca.key());
  std::cout << "root_cert=" << (dir / "root.cert").string() << "\n"
            << "root_key=" << (dir / "root.key").string() << "\n";
  return 0;
}

struct CaIssueArgs {
  std::string ca_dir = ".";
  std::string subject;
  std::string out_dir = ".";
  int days = 365;
  std::optional<int64_t> not_before;
  std::optional<int64_t> not_after;
};

int CaIssue(const CaIssueArgs& a) {
  SystemRandom rng;
  const int64_t now = service::SystemClock();
  const fs::path ca_dir(a.ca_dir);
  pki::CertificateAuthority ca(
      pki::ReadSecretKeyFile((ca_dir / "root.key").string()),
      pki::ReadCertificateFile((ca_dir / "root.cert").string()));
  auto key = pki::SigningKey::Generate(rng);
  auto cert = ca.Issue(a.subject, key.verify_key(),
                       ValidityFrom(now, a.days, a.not_before, a.not_after), rng);
  fs::create_directories(a.out_dir);
  const fs::path dir(a.out_dir);
  const auto cert_path = dir / (a.subject + ".cert");
  const auto key_path = dir / (a.subject + ".key");
  pki::WriteCertificateFile(cert_path.string(), cert);
  pki::WriteSecretKeyFile(key_path.string(), key);
  std::cout << "cert=" << cert_path.string() << "\n"
            << "key=" << key_path.string() << "\n";
  return 0;
}

struct GenDataArgs {
  uint64_t seed = 42;
  size_t size_a = 100;
  size_t size_b = 100;
  size_t intersection = 20;
  size_t columns = 2;
  uint64_t bound = 31;
  std::string out_dir = ".";
};

int GenData(const GenDataArgs& a) {
  auto data = dataset::GenData(a.seed, a.size_a, a.size_b, a.intersection,
                               a.columns, a.bound);
  dataset::WriteGeneratedData(data, a.out_dir);
  std::cout << data.expected;
  return 0;
}

struct PartyArgs {
  std::string cert;
  std::string key;
  std::string root;
  std::string dataset;
  std::string limits = "default";
  std::optional<uint64_t> bound;
};

struct ServerArgs : PartyArgs {
  std::string listen = "0.0.0.0:7155";
  std::string port_file;
  size_t max_sessions = 0;
  std::string transcript_dir = "transcripts";
  int timeout = 60;
};

int Server(const ServerArgs& a) {
  const auto limits = LimitsFor(a.limits);
  const uint64_t bound = a.bound.value_or(limits.max_value_bound);
  service::ServerConfig config;
  config.identity = LoadIdentity(a.cert, a.key);
  config.root = pki::ReadCertificateFile(a.root);
  config.server_ids =
      dataset::Identifiers(dataset::LoadDataset(a.dataset, bound));
  config.limits = limits;
  config.transcript_dir = a.transcript_dir;
  CheckOwnCertificate(config.identity, config.root, service::SystemClock());
  if (config.server_ids.size() > limits.max_records) {
    Fail(ErrorCode::kTooManyRecords, "server dataset exceeds record limit");
  }
  config.receive_timeout_seconds = a.timeout;
  config.on_session = [](const service::SessionReport& r) {
    std::cout << "session status=" << (r.ok ? "ok" : "failed")
              << " peer=" << (r.peer_subject.empty() ? "-" : r.peer_subject);
    if (r.cardinality) std::cout << " cardinality=" << *r.cardinality;
    if (r.error) std::cout << " error=" << ErrorCodeName(*r.error);
    if (r.transcript_path) std::cout << " transcript=" << r.transcript_path->string();
    std::cout << std::endl;
  };

  auto [host, port] = ParseAddress(a.listen);
  service::Service svc(std::move(config));
  uint16_t bound_port = svc.Bind(host, port);
  if (!a.port_file.empty()) {
    dataset::WriteFile(a.port_file, std::to_string(bound_port) + "\n");
  }
  spdlog::info("listening on {}:{}", host, bound_port);
  std::signal(SIGINT, [](int) { g_stop = true; });
  std::signal(SIGTERM, [](int) { g_stop = true; });
  svc.Serve(g_stop, a.max_sessions);
  return 0;
}

struct ClientArgs : PartyArgs {
  std::string connect = "127.0.0.1:7155";
  std::vector<std::string> ops;
  std::string format = "machine";
  int paillier_bits = 2048;
  int timeout = 120;
};

int Client(const ClientArgs& a) {
  const auto limits = LimitsFor(a.limits);
  const uint64_t bound = a.bound.value_or(limits.max_value_bound);
  std::vector<protocol::AggregationEntry> entries;
  for (const auto& op : a.ops) entries.push_back(ParseOp(op));
  auto spec = protocol::AggregationSpec::Create(std::move(entries));
  service::ClientConfig config{LoadIdentity(a.cert, a.key),
                               pki::ReadCertificateFile(a.root),
                               dataset::LoadDataset(a.dataset, bound),
                               spec,
                               limits,
                               {}};
  config.options.paillier_bits = a.paillier_bits;
  config.receive_timeout_seconds = a.timeout;
  CheckOwnCertificate(config.identity, config.root, service::SystemClock());

  auto [host, port] = ParseAddress(a.connect);
  SystemRandom rng;
  auto result = service::RunClient(host, port, config, rng);

  if (a.format == "human") {
    std::cout << "server: " << result.server_subject << "\n"
              << "intersection cardinality: " << result.output.cardinality
              << "\n";
    for (const auto& e : spec.entries()) {
      std::cout << "column " << int{e.column} << " "
                << (e.op == protocol::Operator::kSum ? "sum" : "sum of squares")
                << ": " << result.output.aggregates.at(e) << "\n";
    }
  } else {
    std::cout << dataset::FormatResult(result.output.cardinality,
                                       result.output.aggregates, spec);
  }
  return 0;
}

void AddPartyOptions(CLI::App* cmd, PartyArgs& a) {
  cmd->add_option("--cert", a.cert, "Own certificate file")->required();
  cmd->add_option("--key", a.key, "Own secret key file")->required();
  cmd->add_option("--root", a.root, "Trusted root certificate")->required();
  cmd->add_option("--dataset", a.dataset, "CSV dataset")->required();
  cmd->add_option("--limits", a.limits, "Limits profile")
      ->check(CLI::IsMember({"default", "paper"}));
  cmd->add_option("--bound", a.bound,
                  "Declared value bound (defaults to the profile's bound)");
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_logger_mt("jingbing"));
  spdlog::set_pattern("%Y-%m-%dT%H:%M:%S %l %v");

  CLI::App app{"Private intersection statistics with certificate-based "
               "authentication"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging");

  auto* ca = app.add_subcommand("ca", "Certificate authority");
  ca->require_subcommand(1);
  CaInitArgs ca_init;
  auto* ca_init_cmd = ca->add_subcommand("init", "Create a root CA");
  ca_init_cmd->add_option("--out-dir", ca_init.out_dir, "Output directory");
  ca_init_cmd->add_option("--days", ca_init.days, "Validity in days");

  CaIssueArgs ca_issue;
  auto* ca_issue_cmd = ca->add_subcommand("issue", "Issue a party certificate");
  ca_issue_cmd->add_option("--ca-dir", ca_issue.ca_dir, "Directory with root.cert/root.key");
  ca_issue_cmd->add_option("--subject", ca_issue.subject, "Party name, e.g. NY")->required();
  ca_issue_cmd->add_option("--out-dir", ca_issue.out_dir, "Output directory");
  ca_issue_cmd->add_option("--days", ca_issue.days, "Validity in days");
  ca_issue_cmd->add_option("--not-before", ca_issue.not_before, "Unix time override");
  ca_issue_cmd->add_option("--not-after", ca_issue.not_after, "Unix time override");

  GenDataArgs gen;
  auto* gen_cmd = app.add_subcommand("gendata", "Generate a synthetic dataset pair");
  gen_cmd->add_option("--seed", gen.seed, "RNG seed");
  gen_cmd->add_option("--size-a", gen.size_a, "Client set size");
  gen_cmd->add_option("--size-b", gen.size_b, "Server set size");
  gen_cmd->add_option("--intersection", gen.intersection, "Shared identifiers");
  gen_cmd->add_option("--columns", gen.columns, "Value columns (1-4)");
  gen_cmd->add_option("--bound", gen.bound, "Maximum value");
  gen_cmd->add_option("--out-dir", gen.out_dir, "Output directory");

  ServerArgs server;
  auto* server_cmd = app.add_subcommand("server", "Serve protocol sessions");
  AddPartyOptions(server_cmd, server);
  server_cmd->add_option("--listen", server.listen, "HOST:PORT (port 0 picks one)");
  server_cmd->add_option("--port-file", server.port_file, "Write the bound port here");
  server_cmd->add_option("--max-sessions", server.max_sessions, "Exit after N sessions (0 = run forever)");
  server_cmd->add_option("--transcript-dir", server.transcript_dir, "Signed transcript directory");
  server_cmd->add_option("--timeout", server.timeout, "Receive timeout in seconds");

  ClientArgs client;
  auto* client_cmd = app.add_subcommand("client", "Run one protocol session");
  AddPartyOptions(client_cmd, client);
  client_cmd->add_option("--connect", client.connect, "HOST:PORT of the server");
  client_cmd->add_option("--op", client.ops, "<col>:<sum|sumsq>, repeatable")->required();
  client_cmd->add_option("--format", client.format, "Output format")
      ->check(CLI::IsMember({"machine", "human"}));
  client_cmd->add_option("--paillier-bits", client.paillier_bits, "Paillier modulus size")
      ->check(CLI::IsMember({512, 1024, 2048}));
  client_cmd->add_option("--timeout", client.timeout, "Receive timeout in seconds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return ReportError("Usage", e.what(), kExitValidation);
  }
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);

  try {
    if (ca_init_cmd->parsed()) return CaInit(ca_init);
    if (ca_issue_cmd->parsed()) return CaIssue(ca_issue);
    if (gen_cmd->parsed()) return GenData(gen);
    if (server_cmd->parsed()) return Server(server);
    if (client_cmd->parsed()) return Client(client);
  } catch (const Error& e) {
    return ReportError(ErrorCodeName(e.code()), e.what(), ExitCodeFor(e.code()));
  } catch (const fs::filesystem_error& e) {
    return ReportError("IoError", e.what(), kExitIo);
  } catch (const std::exception& e) {
    return ReportError("Internal", e.what(), kExitProtocol);
  }
  return kExitValidation;
}
