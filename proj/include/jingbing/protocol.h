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

#ifndef JINGBING_PROTOCOL_H_
#define JINGBING_PROTOCOL_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "jingbing/bfv.h"
#include "jingbing/bytes.h"
#include "jingbing/commutative_cipher.h"
#include "jingbing/messages.h"
#include "jingbing/paillier.h"
#include "jingbing/random.h"

// Extended private-join-and-compute state machines.
//
//   client                                   server
//   StartRequest{spec, public keys}   ->
//                                     <-     ServerShuffledSet{H(s)^ks}
//   ClientRoundOne{                   ->
//     shuffled H(s)^(ks*kc),
//     shuffled rows (H(c)^kc, Enc(values))}
//                                     <-     ServerResult{|I|, aggregates}
//
// The server re-encrypts client elements with ks, matches them against the
// doubly encrypted server set, and folds the matching rows' ciphertexts per
// (column, operator): SUM adds Paillier ciphertexts, SUM_OF_SQUARES squares
// BFV ciphertexts and adds them. The client learns the cardinality and the
// aggregates; the server learns the cardinality.
namespace jingbing::protocol {

inline constexpr size_t kMaxColumns = 4;

// Ordered (column, operator) requests. Pairs are distinct; the referenced
// columns are exactly 0..column_count()-1.
class AggregationSpec {
 public:
  // Throws kColumnMismatch on an invalid entry list.
  static AggregationSpec Create(std::vector<AggregationEntry> entries);

  const std::vector<AggregationEntry>& entries() const { return entries_; }
  size_t column_count() const { return column_count_; }
  bool uses(Operator op) const;

 private:
  std::vector<AggregationEntry> entries_;
  size_t column_count_ = 0;
};

struct Record {
  Bytes id;
  std::vector<uint64_t> values;
};

// Identifier records with a declared per-value bound.
class Dataset {
 public:
  // Throws kDuplicateIdentifier, kBoundExceeded, kColumnMismatch or
  // kInvalidIdentifier.
  static Dataset Create(std::vector<Record> records, size_t column_count,
                        uint64_t value_bound);

  const std::vector<Record>& records() const { return records_; }
  size_t size() const { return records_.size(); }
  size_t column_count() const { return column_count_; }
  uint64_t value_bound() const { return value_bound_; }

 private:
  std::vector<Record> records_;
  size_t column_count_ = 0;
  uint64_t value_bound_ = 0;
};

struct Limits {
  size_t max_records = 1000;
  uint64_t max_value_bound = uint64_t{1} << 20;

  static Limits Default() { return {}; }
  // Operational limits of the original proof of concept.
  static Limits Paper() { return {20, 31}; }
};

struct ProtocolOptions {
  int paillier_bits = paillier::kDefaultKeyBits;
  bfv::BfvParams bfv_params = bfv::BfvParams::Default();
};

struct ProtocolOutput {
  uint64_t cardinality = 0;
  std::map<AggregationEntry, uint64_t> aggregates;

  bool operator==(const ProtocolOutput&) const = default;
};

// Accepts iff spec and dataset agree on columns, the declared bound is within
// limits, the record count is within limits, and the worst-case aggregate
// (every record matching) fits each scheme's plaintext space without
// wrapping: records * B^2 < t for SUM_OF_SQUARES, records * B < n for SUM.
// Also throws kFrameTooLarge when the round-one message could exceed the
// frame cap.
void ValidateRequest(const AggregationSpec& spec, const Dataset& ds,
                     const Limits& limits, const ProtocolOptions& options);

// Upper bound on the encoded ClientRoundOne frame (type byte + payload).
size_t RoundOneFrameBound(const AggregationSpec& spec, size_t client_rows,
                          size_t server_rows, const ProtocolOptions& options);

class ProtocolClient {
 public:
  // Validates, generates the session keys and builds the first message.
  static std::pair<ProtocolClient, StartRequest> Start(
      const AggregationSpec& spec, Dataset dataset, const Limits& limits,
      const ProtocolOptions& options, RandomSource& rng);

  ClientRoundOne RoundOne(const ServerShuffledSet& msg, RandomSource& rng);
  ProtocolOutput Finalize(const ServerResult& msg);

 private:
  enum class Phase { kAwaitingShuffledSet, kAwaitingResult, kDone, kFailed };

  ProtocolClient(AggregationSpec spec, Dataset dataset,
                 cipher::GroupScalar key)
      : spec_(std::move(spec)), dataset_(std::move(dataset)), key_(key) {}

  void ExpectPhase(Phase phase) const;

  AggregationSpec spec_;
  Dataset dataset_;
  cipher::GroupScalar key_;
  std::optional<paillier::SecretKey> paillier_;
  std::optional<bfv::Keys> bfv_;
  size_t server_set_size_ = 0;
  Phase phase_ = Phase::kAwaitingShuffledSet;
};

class ProtocolServer {
 public:
  // Validates the request against `limits`, then returns the shuffled
  // singly-encrypted server identifiers. The server contributes identifiers
  // only; `server_ids` must be distinct.
  static std::pair<ProtocolServer, ServerShuffledSet> OnStart(
      const std::vector<Bytes>& server_ids, const Limits& limits,
      const StartRequest& request, RandomSource& rng);

  ServerResult RoundTwo(const ClientRoundOne& msg, RandomSource& rng);

  // Known after RoundTwo.
  std::optional<uint64_t> cardinality() const { return cardinality_; }

 private:
  enum class Phase { kAwaitingRoundOne, kDone, kFailed };

  ProtocolServer(AggregationSpec spec, uint64_t value_bound, Limits limits,
                 cipher::GroupScalar key, size_t server_set_size)
      : spec_(std::move(spec)), value_bound_(value_bound), limits_(limits),
        key_(key), server_set_size_(server_set_size) {}

  AggregationSpec spec_;
  uint64_t value_bound_;
  Limits limits_;
  cipher::GroupScalar key_;
  size_t server_set_size_;
  std::optional<paillier::PublicKey> paillier_;
  std::optional<bfv::PublicKey> bfv_public_;
  std::optional<bfv::RelinKey> bfv_relin_;
  std::optional<uint64_t> cardinality_;
  Phase phase_ = Phase::kAwaitingRoundOne;
};

}  // namespace jingbing::protocol

#endif  // JINGBING_PROTOCOL_H_
