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

#include "jingbing/dataset_io.h"

#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "jingbing/error.h"
#include "jingbing/random.h"

namespace jingbing::dataset {
namespace {

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

uint64_t ParseValue(std::string_view field, size_t line_no) {
  uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  bool digits_only = !field.empty() && field.find_first_not_of("0123456789") ==
                                           std::string_view::npos;
  if (digits_only && ec == std::errc::result_out_of_range) {
    Fail(ErrorCode::kBoundExceeded,
         "line " + std::to_string(line_no) + ": value out of range");
  }
  if (!digits_only || ec != std::errc() || ptr != field.data() + field.size()) {
    Fail(ErrorCode::kNonIntegerValue, "line " + std::to_string(line_no) +
                                          ": '" + std::string(field) +
                                          "' is not a non-negative integer");
  }
  return v;
}

}  // namespace

protocol::Dataset ParseDataset(std::string_view csv, uint64_t value_bound) {
  std::vector<std::string_view> lines;
  size_t start = 0;
  while (start < csv.size()) {
    size_t nl = csv.find('\n', start);
    std::string_view line = csv.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) Fail(ErrorCode::kBadHeader, "missing header");

  auto header = SplitFields(lines[0]);
  size_t columns = header.size() - 1;
  bool ok = header[0] == "id" && columns >= 1 && columns <= protocol::kMaxColumns;
  for (size_t c = 0; ok && c < columns; ++c) {
    ok = header[c + 1] == "col" + std::to_string(c);
  }
  if (!ok) {
    Fail(ErrorCode::kBadHeader, "header must be id,col0[,col1,...] with 1..4 columns");
  }

  std::vector<protocol::Record> records;
  std::unordered_set<std::string_view> ids;
  for (size_t i = 1; i < lines.size(); ++i) {
    auto fields = SplitFields(lines[i]);
    if (fields.size() != columns + 1) {
      Fail(ErrorCode::kColumnMismatch, "line " + std::to_string(i + 1) +
                                           ": expected " +
                                           std::to_string(columns + 1) + " fields");
    }
    if (!ids.insert(fields[0]).second) {
      Fail(ErrorCode::kDuplicateIdentifier,
           "duplicate identifier '" + std::string(fields[0]) + "'");
    }
    protocol::Record r{ToBytes(fields[0]), {}};
    for (size_t c = 0; c < columns; ++c) {
      uint64_t v = ParseValue(fields[c + 1], i + 1);
      if (v > value_bound) {
        Fail(ErrorCode::kBoundExceeded, "line " + std::to_string(i + 1) +
                                            ": value " + std::to_string(v) +
                                            " exceeds bound " +
                                            std::to_string(value_bound));
      }
      r.values.push_back(v);
    }
    records.push_back(std::move(r));
  }
  return protocol::Dataset::Create(std::move(records), columns, value_bound);
}

protocol::Dataset LoadDataset(const std::filesystem::path& path,
                              uint64_t value_bound) {
  return ParseDataset(ReadFile(path), value_bound);
}

std::string FormatDataset(const protocol::Dataset& ds) {
  std::ostringstream out;
  out << "id";
  for (size_t c = 0; c < ds.column_count(); ++c) out << ",col" << c;
  out << '\n';
  for (const auto& r : ds.records()) {
    out << ToString(r.id);
    for (uint64_t v : r.values) out << ',' << v;
    out << '\n';
  }
  return out.str();
}

std::vector<Bytes> Identifiers(const protocol::Dataset& ds) {
  std::vector<Bytes> ids;
  ids.reserve(ds.size());
  for (const auto& r : ds.records()) ids.push_back(r.id);
  return ids;
}

protocol::AggregationSpec FullSpec(size_t columns) {
  std::vector<protocol::AggregationEntry> entries;
  for (size_t c = 0; c < columns; ++c) {
    entries.push_back({static_cast<uint8_t>(c), protocol::Operator::kSum});
    entries.push_back({static_cast<uint8_t>(c), protocol::Operator::kSumOfSquares});
  }
  return protocol::AggregationSpec::Create(std::move(entries));
}

std::string FormatResult(
    uint64_t cardinality,
    const std::map<protocol::AggregationEntry, uint64_t>& aggregates,
    const protocol::AggregationSpec& spec) {
  std::ostringstream out;
  out << "cardinality=" << cardinality << '\n';
  for (const auto& e : spec.entries()) {
    auto it = aggregates.find(e);
    out << "col" << int{e.column} << '.' << protocol::OperatorName(e.op) << '='
        << (it == aggregates.end() ? 0 : it->second) << '\n';
  }
  return out.str();
}

GeneratedData GenData(uint64_t seed, size_t size_a, size_t size_b,
                      size_t intersection, size_t columns, uint64_t bound) {
  if (intersection > std::min(size_a, size_b)) {
    Fail(ErrorCode::kInfeasibleParams,
         "intersection " + std::to_string(intersection) +
             " exceeds the smaller set size");
  }
  if (bound < 1) Fail(ErrorCode::kInfeasibleParams, "bound must be >= 1");
  if (columns < 1 || columns > protocol::kMaxColumns) {
    Fail(ErrorCode::kInfeasibleParams, "columns must be 1..4");
  }
  if (bound == UINT64_MAX) Fail(ErrorCode::kInfeasibleParams, "bound too large");

  SeededRandom rng(seed);
  size_t total = size_a + size_b - intersection;
  std::vector<Bytes> ids;
  std::unordered_set<std::string> used;
  while (ids.size() < total) {
    std::string id = "ID" + std::to_string(1000000000 + rng.Uniform(9000000000));
    if (used.insert(id).second) ids.push_back(ToBytes(id));
  }

  auto make_records = [&](size_t begin, size_t end, size_t shared) {
    std::vector<protocol::Record> out;
    auto add = [&](const Bytes& id) {
      protocol::Record r{id, {}};
      for (size_t c = 0; c < columns; ++c) r.values.push_back(rng.Uniform(bound + 1));
      out.push_back(std::move(r));
    };
    for (size_t i = 0; i < shared; ++i) add(ids[i]);
    for (size_t i = begin; i < end; ++i) add(ids[i]);
    cipher::ShuffleInPlace(out, rng);
    return out;
  };
  auto client = protocol::Dataset::Create(
      make_records(intersection, size_a, intersection), columns, bound);
  auto server = protocol::Dataset::Create(
      make_records(size_a, total, intersection), columns, bound);

  auto spec = FullSpec(columns);
  auto expected = oracle::IntersectionStats(client, Identifiers(server), spec);
  return GeneratedData{
      FormatDataset(client), FormatDataset(server),
      FormatResult(expected.cardinality, expected.aggregates, spec)};
}

void WriteGeneratedData(const GeneratedData& data,
                        const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) Fail(ErrorCode::kIoError, "cannot create " + dir.string());
  WriteFile(dir / "client.csv", data.client_csv);
  WriteFile(dir / "server.csv", data.server_csv);
  WriteFile(dir / "expected.txt", data.expected);
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) Fail(ErrorCode::kIoError, "cannot write " + path.string());
}

}  // namespace jingbing::dataset
