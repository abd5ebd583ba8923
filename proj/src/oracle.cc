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

#include "jingbing/oracle.h"

#include <string>
#include <unordered_set>

#include "jingbing/error.h"

namespace jingbing::oracle {

OracleResult IntersectionStats(const protocol::Dataset& client,
                               const std::vector<Bytes>& server_ids,
                               const protocol::AggregationSpec& spec) {
  if (spec.column_count() != client.column_count()) {
    Fail(ErrorCode::kColumnMismatch, "spec and dataset column counts differ");
  }
  std::unordered_set<std::string> server;
  for (const auto& id : server_ids) server.insert(ToString(id));

  OracleResult result;
  for (const auto& entry : spec.entries()) result.aggregates[entry] = 0;
  for (const auto& record : client.records()) {
    if (!server.contains(ToString(record.id))) continue;
    ++result.cardinality;
    for (auto& [entry, total] : result.aggregates) {
      uint64_t v = record.values[entry.column];
      total += entry.op == protocol::Operator::kSum ? v : v * v;
    }
  }
  return result;
}

}  // namespace jingbing::oracle
