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

#ifndef JINGBING_DATASET_IO_H_
#define JINGBING_DATASET_IO_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "jingbing/oracle.h"
#include "jingbing/protocol.h"

// CSV datasets. Header is `id,col0[,col1,...]` with 1..4 value columns;
// values are unsigned decimal integers.
namespace jingbing::dataset {

// Throws kBadHeader, kColumnMismatch, kNonIntegerValue, kBoundExceeded,
// kDuplicateIdentifier or kInvalidIdentifier.
protocol::Dataset ParseDataset(std::string_view csv, uint64_t value_bound);
// As above; kIoError if the file cannot be read.
protocol::Dataset LoadDataset(const std::filesystem::path& path,
                              uint64_t value_bound);
std::string FormatDataset(const protocol::Dataset& ds);

std::vector<Bytes> Identifiers(const protocol::Dataset& ds);

// Every (column, operator) pair over `columns` columns, sum before sumsq.
protocol::AggregationSpec FullSpec(size_t columns);

// `cardinality=N` then `colI.sum=` / `colI.sumsq=` lines in spec order.
std::string FormatResult(uint64_t cardinality,
                         const std::map<protocol::AggregationEntry, uint64_t>& aggregates,
                         const protocol::AggregationSpec& spec);

struct GeneratedData {
  std::string client_csv;
  std::string server_csv;
  std::string expected;
};

// Deterministic in `seed`. Exactly `intersection` identifiers are shared;
// `expected` holds the oracle result over FullSpec(columns) for the client's
// values. Throws kInfeasibleParams.
GeneratedData GenData(uint64_t seed, size_t size_a, size_t size_b,
                      size_t intersection, size_t columns, uint64_t bound);

// Writes client.csv, server.csv and expected.txt into `dir`.
void WriteGeneratedData(const GeneratedData& data,
                        const std::filesystem::path& dir);

std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view contents);

}  // namespace jingbing::dataset

#endif  // JINGBING_DATASET_IO_H_
