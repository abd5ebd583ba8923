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

#ifndef JINGBING_ORACLE_H_
#define JINGBING_ORACLE_H_

#include <cstdint>
#include <map>
#include <vector>

#include "jingbing/bytes.h"
#include "jingbing/protocol.h"

namespace jingbing::oracle {

// Plaintext intersection statistics. Sees both inputs, so it never runs in a
// deployed session; it is the reference that protocol runs are checked
// against.
struct OracleResult {
  uint64_t cardinality = 0;
  std::map<protocol::AggregationEntry, uint64_t> aggregates;

  bool operator==(const OracleResult&) const = default;
};

// Exact integer arithmetic over byte-identical identifier matches.
// Throws kColumnMismatch if the spec references columns the dataset lacks.
OracleResult IntersectionStats(const protocol::Dataset& client,
                               const std::vector<Bytes>& server_ids,
                               const protocol::AggregationSpec& spec);

inline bool Matches(const OracleResult& expected,
                    const protocol::ProtocolOutput& actual) {
  return expected.cardinality == actual.cardinality &&
         expected.aggregates == actual.aggregates;
}

}  // namespace jingbing::oracle

#endif  // JINGBING_ORACLE_H_
