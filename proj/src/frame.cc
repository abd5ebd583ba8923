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

#include "jingbing/frame.h"

#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <sys/time.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "jingbing/error.h"

namespace jingbing::transport {

bool IsKnownMessageType(uint8_t type) {
  switch (static_cast<MessageType>(type)) {
    case MessageType::kHello:
    case MessageType::kAuthProof:
    case MessageType::kStartRequest:
    case MessageType::kServerShuffledSet:
    case MessageType::kClientRoundOne:
    case MessageType::kServerResult:
    case MessageType::kClose:
    case MessageType::kError:
      return true;
  }
  return false;
}

Bytes EncodeFrame(MessageType type, std::span<const uint8_t> payload) {
  if (payload.size() >= kMaxFrameLength) {
    Fail(ErrorCode::kFrameTooLarge, "frame exceeds 64 MiB");
  }
  ByteWriter w;
  w.PutU32(static_cast<uint32_t>(payload.size() + 1));
  w.PutU8(static_cast<uint8_t>(type));
  w.PutFixed(payload);
  return w.Take();
}

size_t CheckFrameHeader(std::span<const uint8_t, kFrameHeaderSize> header) {
  const uint32_t length = (uint32_t{header[0]} << 24) |
                          (uint32_t{header[1]} << 16) |
                          (uint32_t{header[2]} << 8) | header[3];
  if (length == 0) {
    Fail(ErrorCode::kUnknownMessageType, "zero-length frame has no type");
  }
  if (length > kMaxFrameLength) {
    Fail(ErrorCode::kFrameTooLarge, "declared frame length exceeds cap");
  }
  if (!IsKnownMessageType(header[4])) {
    Fail(ErrorCode::kUnknownMessageType,
         "unknown message type " + std::to_string(header[4]));
  }
  return length - 1;
}

std::pair<Frame, size_t> DecodeFrame(std::span<const uint8_t> stream) {
  if (stream.size() < 4) Fail(ErrorCode::kUnexpectedEof, "truncated header");
  if (stream.size() < kFrameHeaderSize) {
    // Still surface a zero or oversized length before reporting truncation.
    const uint32_t length = (uint32_t{stream[0]} << 24) |
                            (uint32_t{stream[1]} << 16) |
                            (uint32_t{stream[2]} << 8) | stream[3];
    if (length == 0) Fail(ErrorCode::kUnknownMessageType, "zero-length frame");
    if (length > kMaxFrameLength) Fail(ErrorCode::kFrameTooLarge, "oversized");
    Fail(ErrorCode::kUnexpectedEof, "truncated header");
  }
  const size_t payload_len =
      CheckFrameHeader(stream.first<kFrameHeaderSize>());
  if (stream.size() - kFrameHeaderSize < payload_len) {
    Fail(ErrorCode::kUnexpectedEof, "truncated payload");
  }
  auto payload = stream.subspan(kFrameHeaderSize, payload_len);
  return {Frame{static_cast<MessageType>(stream[4]),
                Bytes(payload.begin(), payload.end())},
          kFrameHeaderSize + payload_len};
}

SocketChannel::SocketChannel(int fd) : fd_(fd) {
  int one = 1;
  ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

SocketChannel::~SocketChannel() { Close(); }

std::unique_ptr<SocketChannel> SocketChannel::Connect(const std::string& host,
                                                      uint16_t port) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string service = std::to_string(port);
  if (::getaddrinfo(host.c_str(), service.c_str(), &hints, &res) != 0) {
    Fail(ErrorCode::kConnectionError, "cannot resolve " + host);
  }
  int fd = -1;
  for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0) {
    Fail(ErrorCode::kConnectionError,
         "cannot connect to " + host + ":" + service);
  }
  return std::make_unique<SocketChannel>(fd);
}

void SocketChannel::SetReceiveTimeout(int seconds) {
  timeval tv{};
  tv.tv_sec = seconds;
  ::setsockopt(fd_, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
}

void SocketChannel::SendRaw(std::span<const uint8_t> bytes) {
  if (fd_ < 0) Fail(ErrorCode::kConnectionError, "channel closed");
  size_t off = 0;
  while (off < bytes.size()) {
    ssize_t n = ::send(fd_, bytes.data() + off, bytes.size() - off,
                       MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      Fail(ErrorCode::kConnectionError,
           std::string("send failed: ") + std::strerror(errno));
    }
    off += static_cast<size_t>(n);
  }
}

void SocketChannel::Send(const Frame& frame) { SendRaw(EncodeFrame(frame)); }

void SocketChannel::ReadExact(std::span<uint8_t> out) {
  if (fd_ < 0) Fail(ErrorCode::kConnectionError, "channel closed");
  size_t off = 0;
  while (off < out.size()) {
    ssize_t n = ::recv(fd_, out.data() + off, out.size() - off, 0);
    if (n == 0) Fail(ErrorCode::kUnexpectedEof, "peer closed connection");
    if (n < 0) {
      if (errno == EINTR) continue;
      Fail(ErrorCode::kConnectionError,
           std::string("recv failed: ") + std::strerror(errno));
    }
    off += static_cast<size_t>(n);
  }
}

Frame SocketChannel::Receive() {
  std::array<uint8_t, kFrameHeaderSize> header;
  ReadExact(header);
  const size_t payload_len = CheckFrameHeader(header);
  Frame frame{static_cast<MessageType>(header[4]), Bytes(payload_len)};
  ReadExact(frame.payload);
  return frame;
}

void SocketChannel::Close() {
  if (fd_ >= 0) {
    ::shutdown(fd_, SHUT_RDWR);
    ::close(fd_);
    fd_ = -1;
  }
}

std::pair<std::unique_ptr<MemoryChannel>, std::unique_ptr<MemoryChannel>>
MemoryChannel::Pair() {
  auto a = std::make_shared<Queue>();
  auto b = std::make_shared<Queue>();
  return {std::unique_ptr<MemoryChannel>(new MemoryChannel(a, b)),
          std::unique_ptr<MemoryChannel>(new MemoryChannel(b, a))};
}

void MemoryChannel::Send(const Frame& frame) {
  Bytes encoded = EncodeFrame(frame);
  std::lock_guard<std::mutex> lock(out_->mu);
  if (out_->closed) Fail(ErrorCode::kConnectionError, "channel closed");
  out_->frames.push_back(std::move(encoded));
  out_->cv.notify_all();
}

Frame MemoryChannel::Receive() {
  std::unique_lock<std::mutex> lock(in_->mu);
  in_->cv.wait(lock, [&] { return !in_->frames.empty() || in_->closed; });
  if (in_->frames.empty()) {
    Fail(ErrorCode::kUnexpectedEof, "peer closed connection");
  }
  Bytes encoded = std::move(in_->frames.front());
  in_->frames.pop_front();
  return DecodeFrame(encoded).first;
}

void MemoryChannel::Close() {
  for (auto* q : {in_.get(), out_.get()}) {
    std::lock_guard<std::mutex> lock(q->mu);
    q->closed = true;
    q->cv.notify_all();
  }
}

void ObservedChannel::Send(const Frame& frame) {
  observer_(FlowDirection::kSent, frame);
  inner_.Send(frame);
}

Frame ObservedChannel::Receive() {
  Frame f = inner_.Receive();
  observer_(FlowDirection::kReceived, f);
  return f;
}

}  // namespace jingbing::transport
