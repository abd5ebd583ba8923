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

#include "jingbing/service.h"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <ctime>
#include <variant>

#include <spdlog/spdlog.h>

#include "jingbing/error.h"
#include "jingbing/handshake.h"
#include "jingbing/messages.h"

namespace jingbing::service {
namespace {

using pki::Direction;
using protocol::Message;
using transport::Frame;
using transport::FrameChannel;
using transport::MessageType;

// Appends every frame after the handshake to the session transcript.
class TranscriptChannel final : public FrameChannel {
 public:
  TranscriptChannel(FrameChannel& inner, pki::Transcript& transcript,
                    pki::Role role)
      : inner_(inner), transcript_(transcript),
        sent_(role == pki::Role::kClient ? Direction::kClientToServer
                                         : Direction::kServerToClient),
        received_(role == pki::Role::kClient ? Direction::kServerToClient
                                             : Direction::kClientToServer) {}

  void Send(const Frame& frame) override {
    inner_.Send(frame);
    transcript_.Append(sent_, static_cast<uint8_t>(frame.type),
                       transport::EncodeFrame(frame));
  }
  Frame Receive() override {
    Frame frame = inner_.Receive();
    transcript_.Append(received_, static_cast<uint8_t>(frame.type),
                       transport::EncodeFrame(frame));
    return frame;
  }
  void Close() override { inner_.Close(); }

 private:
  FrameChannel& inner_;
  pki::Transcript& transcript_;
  Direction sent_;
  Direction received_;
};

void SendMessage(FrameChannel& channel, const Message& m) {
  channel.Send(protocol::ToFrame(m));
}

// Receives the next message and requires it to be of type T. A peer Error
// frame surfaces as kPeerError naming the reason.
template <typename T>
T ReceiveMessage(FrameChannel& channel) {
  Frame frame = channel.Receive();
  Message m = protocol::DecodePayload(frame.type, frame.payload);
  if (auto* err = std::get_if<protocol::ErrorMessage>(&m)) {
    Fail(ErrorCode::kPeerError,
         "peer reported " + std::string(protocol::ReasonName(err->reason)));
  }
  if (auto* t = std::get_if<T>(&m)) return std::move(*t);
  Fail(ErrorCode::kPhaseViolation, "unexpected message type");
}

// Best effort: the peer may already be gone.
void SendErrorAndClose(FrameChannel& channel, ErrorCode code) {
  try {
    SendMessage(channel, protocol::ErrorMessage{protocol::ReasonFor(code)});
  } catch (const Error&) {
  }
  channel.Close();
}

std::filesystem::path UniquePath(const std::filesystem::path& dir,
                                 const std::string& stem) {
  auto path = dir / (stem + ".transcript");
  for (int i = 1; std::filesystem::exists(path); ++i) {
    path = dir / (stem + "-" + std::to_string(i) + ".transcript");
  }
  return path;
}

}  // namespace

int64_t SystemClock() { return static_cast<int64_t>(std::time(nullptr)); }

// ---------------------------------------------------------------- server

Service::Service(ServerConfig config) : config_(std::move(config)) {}

Service::~Service() {
  if (listen_fd_ >= 0) ::close(listen_fd_);
}

uint16_t Service::Bind(const std::string& host, uint16_t port) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  const std::string service = std::to_string(port);
  if (int rc = ::getaddrinfo(host.empty() ? nullptr : host.c_str(),
                             service.c_str(), &hints, &res);
      rc != 0) {
    Fail(ErrorCode::kConnectionError,
         "cannot resolve " + host + ": " + ::gai_strerror(rc));
  }
  int fd = -1;
  std::string last_error = "no usable address";
  for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    if (::bind(fd, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(fd, 16) == 0) {
      break;
    }
    last_error = std::strerror(errno);
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0) Fail(ErrorCode::kConnectionError, "cannot listen: " + last_error);

  sockaddr_storage addr{};
  socklen_t len = sizeof(addr);
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  if (listen_fd_ >= 0) ::close(listen_fd_);
  listen_fd_ = fd;
  if (addr.ss_family == AF_INET6) {
    return ntohs(reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port);
  }
  return ntohs(reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
}

void Service::Serve(const std::atomic<bool>& stop, size_t max_sessions) {
  if (listen_fd_ < 0) Fail(ErrorCode::kConnectionError, "not bound");
  size_t served = 0;
  while (!stop.load() && (max_sessions == 0 || served < max_sessions)) {
    pollfd pfd{listen_fd_, POLLIN, 0};
    int ready = ::poll(&pfd, 1, 200);
    if (ready <= 0) continue;
    int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) continue;
    transport::SocketChannel channel(fd);
    channel.SetReceiveTimeout(config_.receive_timeout_seconds);
    ServeOne(channel);
    ++served;
  }
}

SessionReport Service::ServeOne(FrameChannel& channel) {
  SessionReport report;
  const int64_t started = config_.clock();
  SystemRandom rng;

  std::optional<pki::HandshakeResult> hs;
  try {
    hs = pki::MutualHandshake(pki::Role::kServer, config_.identity,
                              config_.root, channel, rng, started);
  } catch (const Error& e) {
    // Rejected peers see the connection close and nothing else.
    spdlog::warn("handshake rejected: {}", e.what());
    channel.Close();
    report.error = ErrorCode::kHandshakeFailed;
    Record(report);
    return report;
  }
  report.peer_subject = hs->peer_subject;
  spdlog::info("session with {} started", hs->peer_subject);

  TranscriptChannel tc(channel, hs->transcript, pki::Role::kServer);
  try {
    auto start = ReceiveMessage<protocol::StartRequest>(tc);
    auto [server, shuffled] = protocol::ProtocolServer::OnStart(
        config_.server_ids, config_.limits, start, rng);
    SendMessage(tc, shuffled);
    auto round_one = ReceiveMessage<protocol::ClientRoundOne>(tc);
    auto result = server.RoundTwo(round_one, rng);
    SendMessage(tc, result);
    report.cardinality = server.cardinality();

    // Close is signed over the transcript up to ServerResult and is not
    // itself part of the chain.
    Frame close_frame = channel.Receive();
    Message close = protocol::DecodePayload(close_frame.type, close_frame.payload);
    auto* cm = std::get_if<protocol::CloseMessage>(&close);
    if (cm == nullptr) Fail(ErrorCode::kPhaseViolation, "expected Close");
    pki::VerifyTranscript(hs->peer_certificate, hs->transcript,
                          cm->client_signature);

    pki::TranscriptRecord record{
        hs->transcript, hs->peer_subject, config_.identity.certificate.subject,
        cm->client_signature,
        pki::FinalizeTranscript(config_.identity.key, hs->transcript)};
    if (!config_.transcript_dir.empty()) {
      std::filesystem::create_directories(config_.transcript_dir);
      auto path = UniquePath(config_.transcript_dir,
                             std::to_string(started) + "-" + hs->peer_subject);
      std::string bytes = ToString(record.Serialize());
      std::FILE* f = std::fopen(path.c_str(), "wb");
      if (f == nullptr ||
          std::fwrite(bytes.data(), 1, bytes.size(), f) != bytes.size()) {
        if (f != nullptr) std::fclose(f);
        Fail(ErrorCode::kIoError, "cannot write " + path.string());
      }
      std::fclose(f);
      report.transcript_path = path;
    }
    report.record = std::move(record);
    report.ok = true;
    channel.Close();
    spdlog::info("session with {} complete, cardinality {}", hs->peer_subject,
                 *report.cardinality);
  } catch (const Error& e) {
    spdlog::warn("session with {} failed: {}", hs->peer_subject, e.what());
    report.error = e.code();
    if (e.code() == ErrorCode::kPeerError ||
        e.code() == ErrorCode::kUnexpectedEof ||
        e.code() == ErrorCode::kConnectionError) {
      channel.Close();
    } else {
      SendErrorAndClose(channel, e.code());
    }
  } catch (const std::exception& e) {
    spdlog::error("session with {} failed: {}", hs->peer_subject, e.what());
    report.error = ErrorCode::kInvalidArgument;
    SendErrorAndClose(channel, ErrorCode::kInvalidArgument);
  }
  Record(report);
  return report;
}

void Service::Record(const SessionReport& report) {
  reports_.push_back(report);
  if (config_.on_session) config_.on_session(report);
}

// ---------------------------------------------------------------- client

namespace {

ClientResult RunSession(FrameChannel& channel, const ClientConfig& config,
                        protocol::ProtocolClient client,
                        const protocol::StartRequest& start,
                        RandomSource& rng) {
  pki::HandshakeResult hs = [&] {
    try {
      return pki::MutualHandshake(pki::Role::kClient, config.identity,
                                  config.root, channel, rng, config.clock());
    } catch (const Error& e) {
      channel.Close();
      Fail(ErrorCode::kHandshakeFailed, e.what());
    }
  }();

  TranscriptChannel tc(channel, hs.transcript, pki::Role::kClient);
  try {
    SendMessage(tc, start);
    auto shuffled = ReceiveMessage<protocol::ServerShuffledSet>(tc);
    SendMessage(tc, client.RoundOne(shuffled, rng));
    auto result = ReceiveMessage<protocol::ServerResult>(tc);
    protocol::ProtocolOutput output = client.Finalize(result);

    pki::Signature sig = pki::FinalizeTranscript(config.identity.key,
                                                 hs.transcript);
    SendMessage(channel, protocol::CloseMessage{sig});
    channel.Close();
    return ClientResult{std::move(output), hs.peer_subject,
                        std::move(hs.transcript), sig};
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kPeerError ||
        e.code() == ErrorCode::kUnexpectedEof ||
        e.code() == ErrorCode::kConnectionError) {
      channel.Close();
    } else {
      SendErrorAndClose(channel, e.code());
    }
    throw;
  }
}

}  // namespace

ClientResult RunClient(FrameChannel& channel, const ClientConfig& config,
                       RandomSource& rng) {
  auto [client, start] = protocol::ProtocolClient::Start(
      config.spec, config.dataset, config.limits, config.options, rng);
  return RunSession(channel, config, std::move(client), start, rng);
}

ClientResult RunClient(const std::string& host, uint16_t port,
                       const ClientConfig& config, RandomSource& rng) {
  auto [client, start] = protocol::ProtocolClient::Start(
      config.spec, config.dataset, config.limits, config.options, rng);
  auto channel = transport::SocketChannel::Connect(host, port);
  channel->SetReceiveTimeout(config.receive_timeout_seconds);
  return RunSession(*channel, config, std::move(client), start, rng);
}

}  // namespace jingbing::service
