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

#ifndef JINGBING_FRAME_H_
#define JINGBING_FRAME_H_

#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include "jingbing/bytes.h"

// Wire framing: length (4 bytes big-endian, counts the type byte plus the
// payload) || type (1 byte) || payload.
namespace jingbing::transport {

enum class MessageType : uint8_t {
  kHello = 0x01,
  kAuthProof = 0x02,
  kStartRequest = 0x10,
  kServerShuffledSet = 0x11,
  kClientRoundOne = 0x12,
  kServerResult = 0x13,
  kClose = 0x14,
  kError = 0x7F,
};

bool IsKnownMessageType(uint8_t type);

inline constexpr uint32_t kMaxFrameLength = 64u << 20;  // 64 MiB
inline constexpr size_t kFrameHeaderSize = 5;

struct Frame {
  MessageType type;
  Bytes payload;

  bool operator==(const Frame&) const = default;
};

// Throws kFrameTooLarge when type + payload exceeds the cap.
Bytes EncodeFrame(MessageType type, std::span<const uint8_t> payload);
inline Bytes EncodeFrame(const Frame& f) { return EncodeFrame(f.type, f.payload); }

// Decodes exactly one frame from the front of `stream` and reports how many
// bytes it consumed. Throws kUnexpectedEof (truncated), kFrameTooLarge, or
// kUnknownMessageType (including a zero declared length).
std::pair<Frame, size_t> DecodeFrame(std::span<const uint8_t> stream);

// Validates a 5-byte header; returns the payload length that follows.
size_t CheckFrameHeader(std::span<const uint8_t, kFrameHeaderSize> header);

// Bidirectional frame transport.
class FrameChannel {
 public:
  virtual ~FrameChannel() = default;
  virtual void Send(const Frame& frame) = 0;
  // Throws kUnexpectedEof when the peer closed the connection.
  virtual Frame Receive() = 0;
  virtual void Close() = 0;
};

// Connected TCP socket; owns the descriptor.
class SocketChannel final : public FrameChannel {
 public:
  explicit SocketChannel(int fd);
  ~SocketChannel() override;
  SocketChannel(const SocketChannel&) = delete;
  SocketChannel& operator=(const SocketChannel&) = delete;

  // Throws kConnectionError if the connection cannot be established.
  static std::unique_ptr<SocketChannel> Connect(const std::string& host,
                                                uint16_t port);

  void SetReceiveTimeout(int seconds);
  // Raw bytes, for fault-injection tests.
  void SendRaw(std::span<const uint8_t> bytes);

  void Send(const Frame& frame) override;
  Frame Receive() override;
  void Close() override;

 private:
  void ReadExact(std::span<uint8_t> out);
  int fd_;
};

// In-process pipe; MemoryChannel::Pair() returns the two connected ends.
class MemoryChannel final : public FrameChannel {
 public:
  static std::pair<std::unique_ptr<MemoryChannel>,
                   std::unique_ptr<MemoryChannel>>
  Pair();

  void Send(const Frame& frame) override;
  Frame Receive() override;
  void Close() override;

 private:
  struct Queue {
    std::mutex mu;
    std::condition_variable cv;
    std::deque<Bytes> frames;
    bool closed = false;
  };
  MemoryChannel(std::shared_ptr<Queue> in, std::shared_ptr<Queue> out)
      : in_(std::move(in)), out_(std::move(out)) {}

  std::shared_ptr<Queue> in_;
  std::shared_ptr<Queue> out_;
};

enum class FlowDirection { kSent, kReceived };

// Decorator that reports every frame crossing the wrapped channel.
class ObservedChannel final : public FrameChannel {
 public:
  using Observer = std::function<void(FlowDirection, const Frame&)>;
  ObservedChannel(FrameChannel& inner, Observer observer)
      : inner_(inner), observer_(std::move(observer)) {}

  void Send(const Frame& frame) override;
  Frame Receive() override;
  void Close() override { inner_.Close(); }

 private:
  FrameChannel& inner_;
  Observer observer_;
};

}  // namespace jingbing::transport

#endif  // JINGBING_FRAME_H_
