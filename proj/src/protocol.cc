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

#include "jingbing/protocol.h"

#include <algorithm>
#include <set>
#include <string>
#include <unordered_set>

#include "jingbing/error.h"

namespace jingbing::protocol {
namespace {

using uint128 = unsigned __int128;

// Worst-case aggregate for `count` matching rows under bound `b`.
uint128 MaxAggregate(Operator op, uint64_t count, uint64_t b) {
  uint128 per_row = op == Operator::kSum ? uint128{b} : uint128{b} * b;
  return per_row * count;
}

void CheckCapacity(const AggregationSpec& spec, uint64_t records,
                   uint64_t bound, size_t paillier_bits,
                   uint64_t plain_modulus) {
  if (spec.uses(Operator::kSumOfSquares) &&
      MaxAggregate(Operator::kSumOfSquares, records, bound) >= plain_modulus) {
    Fail(ErrorCode::kCapacityExceeded,
         std::to_string(records) + " records with bound " +
             std::to_string(bound) + " overflow plaintext modulus " +
             std::to_string(plain_modulus));
  }
  // A Paillier modulus of k bits exceeds 2^(k-1); sums below 2^64 always fit
  // once k > 64.
  if (spec.uses(Operator::kSum) && paillier_bits <= 128) {
    Fail(ErrorCode::kCapacityExceeded, "Paillier modulus too small");
  }
}

// Ciphertext decoding failures on the server side are message format errors.
template <typename F>
auto DecodeOrMalformed(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kMalformedMessage) throw;
    Fail(ErrorCode::kMalformedMessage, e.what());
  }
}

}  // namespace

AggregationSpec AggregationSpec::Create(std::vector<AggregationEntry> entries) {
  if (entries.empty()) Fail(ErrorCode::kColumnMismatch, "empty aggregation spec");
  std::set<AggregationEntry> seen;
  size_t max_column = 0;
  for (const auto& e : entries) {
    if (e.op != Operator::kSum && e.op != Operator::kSumOfSquares) {
      Fail(ErrorCode::kColumnMismatch, "unknown operator");
    }
    if (!seen.insert(e).second) {
      Fail(ErrorCode::kColumnMismatch,
           "duplicate entry for column " + std::to_string(e.column));
    }
    max_column = std::max<size_t>(max_column, e.column);
  }
  if (max_column >= kMaxColumns) {
    Fail(ErrorCode::kColumnMismatch, "at most 4 columns are supported");
  }
  std::vector<bool> used(max_column + 1, false);
  for (const auto& e : entries) used[e.column] = true;
  if (std::find(used.begin(), used.end(), false) != used.end()) {
    Fail(ErrorCode::kColumnMismatch, "column indices must be dense from 0");
  }
  AggregationSpec spec;
  spec.entries_ = std::move(entries);
  spec.column_count_ = max_column + 1;
  return spec;
}

bool AggregationSpec::uses(Operator op) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [op](const AggregationEntry& e) { return e.op == op; });
}

Dataset Dataset::Create(std::vector<Record> records, size_t column_count,
                        uint64_t value_bound) {
  if (column_count < 1 || column_count > kMaxColumns) {
    Fail(ErrorCode::kColumnMismatch, "column count must be 1..4");
  }
  std::unordered_set<std::string> ids;
  for (const auto& r : records) {
    if (r.id.empty() || r.id.size() > cipher::kMaxIdentifierSize) {
      Fail(ErrorCode::kInvalidIdentifier, "identifier must be 1..128 bytes");
    }
    if (r.values.size() != column_count) {
      Fail(ErrorCode::kColumnMismatch,
           "record '" + ToString(r.id) + "' has " +
               std::to_string(r.values.size()) + " values, expected " +
               std::to_string(column_count));
    }
    for (uint64_t v : r.values) {
      if (v > value_bound) {
        Fail(ErrorCode::kBoundExceeded,
             "value " + std::to_string(v) + " exceeds bound " +
                 std::to_string(value_bound));
      }
    }
    if (!ids.insert(ToString(r.id)).second) {
      Fail(ErrorCode::kDuplicateIdentifier,
           "duplicate identifier '" + ToString(r.id) + "'");
    }
  }
  Dataset ds;
  ds.records_ = std::move(records);
  ds.column_count_ = column_count;
  ds.value_bound_ = value_bound;
  return ds;
}

void ValidateRequest(const AggregationSpec& spec, const Dataset& ds,
                     const Limits& limits, const ProtocolOptions& options) {
  if (spec.column_count() != ds.column_count()) {
    Fail(ErrorCode::kColumnMismatch,
         "spec references " + std::to_string(spec.column_count()) +
             " columns, dataset has " + std::to_string(ds.column_count()));
  }
  if (ds.value_bound() > limits.max_value_bound) {
    Fail(ErrorCode::kBoundExceeded,
         "bound " + std::to_string(ds.value_bound()) + " exceeds limit " +
             std::to_string(limits.max_value_bound));
  }
  if (ds.size() > limits.max_records) {
    Fail(ErrorCode::kTooManyRecords,
         std::to_string(ds.size()) + " records exceed limit " +
             std::to_string(limits.max_records));
  }
  CheckCapacity(spec, ds.size(), ds.value_bound(),
                static_cast<size_t>(options.paillier_bits),
                options.bfv_params.plain_modulus);
  // The round-one message carries every row in one frame; refuse requests
  // that cannot fit before any key generation or network activity.
  const size_t frame = RoundOneFrameBound(spec, ds.size(), limits.max_records,
                                          options);
  if (frame > transport::kMaxFrameLength) {
    Fail(ErrorCode::kFrameTooLarge,
         std::to_string(ds.size()) + " rows need about " +
             std::to_string(frame >> 20) + " MiB in one frame");
  }
}

size_t RoundOneFrameBound(const AggregationSpec& spec, size_t client_rows,
                          size_t server_rows, const ProtocolOptions& options) {
  // Length-prefixed magnitude below n^2.
  const size_t paillier_ct = 4 + 2 * static_cast<size_t>(options.paillier_bits) / 8;
  const auto& p = options.bfv_params;
  const size_t bfv_ct = 32 + 2 * (4 + p.degree * p.coeff_width());
  size_t row = cipher::kGroupElementSize + 4;
  for (const auto& e : spec.entries()) {
    row += 1 + 4 + (e.op == Operator::kSum ? paillier_ct : bfv_ct);
  }
  return 1 + 4 + server_rows * cipher::kGroupElementSize + 4 +
         client_rows * row;
}

// ---------------------------------------------------------------- client

std::pair<ProtocolClient, StartRequest> ProtocolClient::Start(
    const AggregationSpec& spec, Dataset dataset, const Limits& limits,
    const ProtocolOptions& options, RandomSource& rng) {
  ValidateRequest(spec, dataset, limits, options);
  ProtocolClient client(spec, std::move(dataset), cipher::Keygen(rng));

  StartRequest req;
  req.version = kProtocolVersion;
  req.column_count = static_cast<uint8_t>(spec.column_count());
  req.value_bound = client.dataset_.value_bound();
  req.spec = spec.entries();
  if (spec.uses(Operator::kSum)) {
    client.paillier_ = paillier::Keygen(options.paillier_bits, rng);
    req.paillier_public_key = client.paillier_->public_key().Serialize();
  }
  if (spec.uses(Operator::kSumOfSquares)) {
    client.bfv_ = bfv::Keygen(options.bfv_params, rng);
    req.bfv_keys = BfvKeyMaterial{client.bfv_->public_key.Serialize(),
                                  client.bfv_->relin_key.Serialize()};
  }
  return {std::move(client), std::move(req)};
}

void ProtocolClient::ExpectPhase(Phase phase) const {
  if (phase_ != phase) Fail(ErrorCode::kPhaseViolation, "unexpected message");
}

ClientRoundOne ProtocolClient::RoundOne(const ServerShuffledSet& msg,
                                        RandomSource& rng) {
  ExpectPhase(Phase::kAwaitingShuffledSet);
  try {
    ClientRoundOne out;
    out.double_encrypted_server.reserve(msg.elements.size());
    for (const auto& g : msg.elements) {
      out.double_encrypted_server.push_back(cipher::Reencrypt(key_, g));
    }
    cipher::ShuffleInPlace(out.double_encrypted_server, rng);

    out.rows.reserve(dataset_.size());
    for (const auto& record : dataset_.records()) {
      ClientRow row{cipher::Encrypt(key_, record.id), {}};
      for (const auto& entry : spec_.entries()) {
        uint64_t v = record.values[entry.column];
        if (entry.op == Operator::kSum) {
          auto ct = paillier::Encrypt(paillier_->public_key(), mpz_class(v), rng);
          row.values.push_back({Scheme::kPaillier, ct.Serialize()});
        } else {
          auto ct = bfv::Encrypt(bfv_->public_key, v, rng);
          row.values.push_back({Scheme::kBfv, ct.Serialize()});
        }
      }
      out.rows.push_back(std::move(row));
    }
    cipher::ShuffleInPlace(out.rows, rng);
    server_set_size_ = msg.elements.size();
    phase_ = Phase::kAwaitingResult;
    return out;
  } catch (...) {
    phase_ = Phase::kFailed;
    throw;
  }
}

ProtocolOutput ProtocolClient::Finalize(const ServerResult& msg) {
  ExpectPhase(Phase::kAwaitingResult);
  try {
    if (msg.cardinality > dataset_.size() ||
        msg.cardinality > server_set_size_) {
      Fail(ErrorCode::kProtocolViolation,
           "cardinality exceeds a party's set size");
    }
    const auto& entries = spec_.entries();
    if (msg.aggregates.size() != entries.size()) {
      Fail(ErrorCode::kMalformedMessage, "aggregate count does not match spec");
    }
    ProtocolOutput out;
    out.cardinality = msg.cardinality;
    for (size_t i = 0; i < entries.size(); ++i) {
      const auto& entry = entries[i];
      const auto& value = msg.aggregates[i];
      if (value.scheme != SchemeFor(entry.op)) {
        Fail(ErrorCode::kMalformedMessage, "aggregate scheme mismatch");
      }
      uint128 limit =
          MaxAggregate(entry.op, msg.cardinality, dataset_.value_bound());
      uint64_t plain;
      if (entry.op == Operator::kSum) {
        const auto& pk = paillier_->public_key();
        mpz_class m = paillier::Decrypt(
            *paillier_, paillier::Ciphertext::Deserialize(pk, value.ciphertext));
        if (m > mpz_class(static_cast<unsigned long>(limit))) {
          Fail(ErrorCode::kProtocolViolation,
               "aggregate for column " + std::to_string(entry.column) +
                   " exceeds cardinality bound");
        }
        plain = m.get_ui();
      } else {
        plain = bfv::Decrypt(
            bfv_->secret_key,
            bfv_->public_key.DeserializeCiphertext(value.ciphertext));
        if (plain > limit) {
          Fail(ErrorCode::kProtocolViolation,
               "aggregate for column " + std::to_string(entry.column) +
                   " exceeds cardinality bound");
        }
      }
      out.aggregates[entry] = plain;
    }
    phase_ = Phase::kDone;
    return out;
  } catch (...) {
    phase_ = Phase::kFailed;
    throw;
  }
}

// ---------------------------------------------------------------- server

std::pair<ProtocolServer, ServerShuffledSet> ProtocolServer::OnStart(
    const std::vector<Bytes>& server_ids, const Limits& limits,
    const StartRequest& request, RandomSource& rng) {
  if (request.version != kProtocolVersion) {
    Fail(ErrorCode::kUnsupportedVersion,
         "protocol version " + std::to_string(request.version));
  }
  AggregationSpec spec = AggregationSpec::Create(request.spec);
  if (spec.column_count() != request.column_count) {
    Fail(ErrorCode::kColumnMismatch, "column count does not match spec");
  }
  if (request.value_bound > limits.max_value_bound) {
    Fail(ErrorCode::kBoundExceeded,
         "requested bound " + std::to_string(request.value_bound) +
             " exceeds limit " + std::to_string(limits.max_value_bound));
  }
  if (spec.uses(Operator::kSum) != request.paillier_public_key.has_value() ||
      spec.uses(Operator::kSumOfSquares) != request.bfv_keys.has_value()) {
    Fail(ErrorCode::kMalformedMessage, "key material does not match spec");
  }

  ProtocolServer server(spec, request.value_bound, limits,
                        cipher::Keygen(rng), server_ids.size());
  if (request.paillier_public_key) {
    server.paillier_ =
        paillier::PublicKey::Deserialize(*request.paillier_public_key);
  }
  if (request.bfv_keys) {
    server.bfv_public_ = DecodeOrMalformed(
        [&] { return bfv::PublicKey::Deserialize(request.bfv_keys->public_key); });
    server.bfv_relin_ = DecodeOrMalformed([&] {
      return bfv::RelinKey::Deserialize(*server.bfv_public_,
                                        request.bfv_keys->relin_key);
    });
  }
  // One record of headroom check; the row count is re-checked in round two.
  CheckCapacity(spec, 1, request.value_bound,
                server.paillier_ ? server.paillier_->bits() : 2048,
                server.bfv_public_ ? server.bfv_public_->params().plain_modulus
                                   : UINT64_MAX);

  ServerShuffledSet out;
  out.elements.reserve(server_ids.size());
  for (const auto& id : server_ids) {
    out.elements.push_back(cipher::Encrypt(server.key_, id));
  }
  cipher::ShuffleInPlace(out.elements, rng);
  return {std::move(server), std::move(out)};
}

ServerResult ProtocolServer::RoundTwo(const ClientRoundOne& msg,
                                      RandomSource& rng) {
  if (phase_ != Phase::kAwaitingRoundOne) {
    Fail(ErrorCode::kPhaseViolation, "unexpected message");
  }
  try {
    if (msg.double_encrypted_server.size() != server_set_size_) {
      Fail(ErrorCode::kMalformedMessage, "server set size changed");
    }
    std::unordered_set<cipher::GroupElement, cipher::GroupElementHash> server_set(
        msg.double_encrypted_server.begin(), msg.double_encrypted_server.end());
    if (server_set.size() != server_set_size_) {
      Fail(ErrorCode::kMalformedMessage, "duplicate double-encrypted element");
    }
    if (msg.rows.size() > limits_.max_records) {
      Fail(ErrorCode::kTooManyRecords,
           std::to_string(msg.rows.size()) + " rows exceed limit " +
               std::to_string(limits_.max_records));
    }
    CheckCapacity(spec_, msg.rows.size(), value_bound_,
                  paillier_ ? paillier_->bits() : 2048,
                  bfv_public_ ? bfv_public_->params().plain_modulus
                              : UINT64_MAX);

    const auto& entries = spec_.entries();
    std::unordered_set<cipher::GroupElement, cipher::GroupElementHash> seen;
    std::vector<std::optional<paillier::Ciphertext>> sums(entries.size());
    std::vector<std::optional<bfv::Ciphertext>> squares(entries.size());
    uint64_t cardinality = 0;

    for (const auto& row : msg.rows) {
      if (!seen.insert(row.element).second) {
        Fail(ErrorCode::kMalformedMessage, "duplicate client element");
      }
      if (row.values.size() != entries.size()) {
        Fail(ErrorCode::kMalformedMessage, "row value count does not match spec");
      }
      // Decode every row, matched or not, so malformed input is always caught.
      std::vector<std::optional<paillier::Ciphertext>> p(entries.size());
      std::vector<std::optional<bfv::Ciphertext>> b(entries.size());
      for (size_t i = 0; i < entries.size(); ++i) {
        const auto& v = row.values[i];
        if (v.scheme != SchemeFor(entries[i].op)) {
          Fail(ErrorCode::kMalformedMessage, "value scheme does not match spec");
        }
        if (v.scheme == Scheme::kPaillier) {
          p[i] = DecodeOrMalformed([&] {
            return paillier::Ciphertext::Deserialize(*paillier_, v.ciphertext);
          });
        } else {
          b[i] = DecodeOrMalformed(
              [&] { return bfv_public_->DeserializeCiphertext(v.ciphertext); });
        }
      }
      if (!server_set.contains(cipher::Reencrypt(key_, row.element))) continue;
      ++cardinality;
      for (size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].op == Operator::kSum) {
          sums[i] = sums[i] ? paillier::Add(*paillier_, *sums[i], *p[i]) : *p[i];
        } else {
          bfv::Ciphertext sq = bfv::Multiply(*bfv_relin_, *b[i], *b[i]);
          squares[i] = squares[i] ? bfv::Add(*squares[i], sq) : sq;
        }
      }
    }

    ServerResult out;
    out.cardinality = cardinality;
    for (size_t i = 0; i < entries.size(); ++i) {
      if (entries[i].op == Operator::kSum) {
        auto ct = sums[i] ? paillier::Rerandomize(*paillier_, *sums[i], rng)
                          : paillier::Encrypt(*paillier_, mpz_class(0), rng);
        out.aggregates.push_back({Scheme::kPaillier, ct.Serialize()});
      } else {
        auto ct = squares[i]
                      ? bfv::AddZeroRerandomize(*bfv_public_, *squares[i], rng)
                      : bfv::Encrypt(*bfv_public_, 0, rng);
        out.aggregates.push_back({Scheme::kBfv, ct.Serialize()});
      }
    }
    cardinality_ = cardinality;
    phase_ = Phase::kDone;
    return out;
  } catch (...) {
    phase_ = Phase::kFailed;
    throw;
  }
}

}  // namespace jingbing::protocol
