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

#ifndef JINGBING_SERVICE_H_
#define JINGBING_SERVICE_H_

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "jingbing/frame.h"
#include "jingbing/pki.h"
#include "jingbing/protocol.h"
#include "jingbing/random.h"
#include "jingbing/transcript.h"

// Session driver for both roles. A session is: mutual handshake, then
// StartRequest, ServerShuffledSet, ClientRoundOne, ServerResult, and finally
// Close carrying the client's signature over the transcript so far.
namespace jingbing::service {

inline constexpr uint16_t kDefaultPort = 7155;

using Clock = std::function<int64_t()>;
int64_t SystemClock();

struct SessionReport;

struct ServerConfig {
  pki::Identity identity;
  pki::Certificate root;
  std::vector<Bytes> server_ids;
  protocol::Limits limits;
  // Where `<unixtime>-<peer>.transcript` files go; none written if empty.
  std::filesystem::path transcript_dir;
  Clock clock = SystemClock;
  int receive_timeout_seconds = 60;
  // Called after every session, successful or not.
  std::function<void(const SessionReport&)> on_session;
};

struct SessionReport {
  bool ok = false;
  std::string peer_subject;
  std::optional<ErrorCode> error;
  std::optional<uint64_t> cardinality;
  std::optional<std::filesystem::path> transcript_path;
  std::optional<pki::TranscriptRecord> record;
};

class Service {
 public:
  explicit Service(ServerConfig config);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Binds and listens; returns the bound port (useful with port 0).
  // Throws kConnectionError.
  uint16_t Bind(const std::string& host, uint16_t port);

  // Accepts and serves connections one at a time until `stop` becomes true
  // or `max_sessions` sessions (any outcome) have run; 0 means unlimited.
  // A failing session never ends the loop.
  void Serve(const std::atomic<bool>& stop, size_t max_sessions = 0);

  // Runs one session on an already-connected channel with fresh state.
  SessionReport ServeOne(transport::FrameChannel& channel);

  const std::vector<SessionReport>& reports() const { return reports_; }

 private:
  void Record(const SessionReport& report);

  ServerConfig config_;
  int listen_fd_ = -1;
  std::vector<SessionReport> reports_;
};

struct ClientConfig {
  pki::Identity identity;
  pki::Certificate root;
  protocol::Dataset dataset;
  protocol::AggregationSpec spec;
  protocol::Limits limits;
  protocol::ProtocolOptions options;
  Clock clock = SystemClock;
  int receive_timeout_seconds = 120;
};

struct ClientResult {
  protocol::ProtocolOutput output;
  std::string server_subject;
  pki::Transcript transcript;
  pki::Signature client_signature{};
};

// Validates and builds the first message before touching the network.
// Throws the validation error, kConnectionError, kHandshakeFailed,
// kPeerError (server sent an Error frame; message names the reason) or the
// local protocol error.
ClientResult RunClient(const std::string& host, uint16_t port,
                       const ClientConfig& config, RandomSource& rng);

// Same, over an existing channel.
ClientResult RunClient(transport::FrameChannel& channel,
                       const ClientConfig& config, RandomSource& rng);

}  // namespace jingbing::service

#endif  // JINGBING_SERVICE_H_
