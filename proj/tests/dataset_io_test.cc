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

#include <filesystem>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "jingbing/dataset_io.h"
#include "jingbing/oracle.h"
#include "test_util.h"

namespace jingbing::dataset {
namespace {

std::set<Bytes> IdSet(const protocol::Dataset& ds) {
  const auto ids = Identifiers(ds);
  return {ids.begin(), ids.end()};
}

TEST(ParseDataset, TwoColumns) {
  const auto ds = ParseDataset("id,col0,col1\na,1,2\nb,3,4\nc,5,31\n", 31);
  EXPECT_EQ(ds.column_count(), 2u);
  EXPECT_EQ(ds.size(), 3u);
  EXPECT_EQ(ds.records()[2].values, (std::vector<uint64_t>{5, 31}));
  EXPECT_EQ(ParseDataset(FormatDataset(ds), 31).records()[1].values,
            ds.records()[1].values);
  EXPECT_EQ(FormatDataset(ParseDataset(FormatDataset(ds), 31)),
            FormatDataset(ds));
}

TEST(ParseDataset, ToleratesCrlfAndTrailingBlankLines) {
  const auto ds = ParseDataset("id,col0\r\nx,1\r\ny,2\r\n\r\n\n", 31);
  EXPECT_EQ(ds.size(), 2u);
  EXPECT_EQ(ds.records()[1].id, ToBytes("y"));
}

TEST(ParseDataset, Errors) {
  try {
    ParseDataset("id,col0\nalice,1\nalice,2\n", 31);
    FAIL() << "duplicate accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDuplicateIdentifier);
    EXPECT_NE(std::string(e.what()).find("alice"), std::string::npos);
  }
  EXPECT_ERROR_CODE(ParseDataset("id,col0\na,-1\n", 31),
                    ErrorCode::kNonIntegerValue);
  EXPECT_ERROR_CODE(ParseDataset("id,col0\na,1.5\n", 31),
                    ErrorCode::kNonIntegerValue);
  EXPECT_ERROR_CODE(ParseDataset("id,col0\na,\n", 31),
                    ErrorCode::kNonIntegerValue);
  EXPECT_ERROR_CODE(ParseDataset("id,col0\na,99999999999999999999999\n", 31),
                    ErrorCode::kBoundExceeded);
  EXPECT_ERROR_CODE(ParseDataset("id,col0\na,32\n", 31),
                    ErrorCode::kBoundExceeded);
  EXPECT_ERROR_CODE(ParseDataset("ident,col0\na,1\n", 31), ErrorCode::kBadHeader);
  EXPECT_ERROR_CODE(ParseDataset("id,col1\na,1\n", 31), ErrorCode::kBadHeader);
  EXPECT_ERROR_CODE(ParseDataset("id\na\n", 31), ErrorCode::kBadHeader);
  EXPECT_ERROR_CODE(ParseDataset("id,col0,col1,col2,col3,col4\n", 31),
                    ErrorCode::kBadHeader);
  EXPECT_ERROR_CODE(ParseDataset("", 31), ErrorCode::kBadHeader);
  EXPECT_ERROR_CODE(ParseDataset("id,col0\na,1,2\n", 31),
                    ErrorCode::kColumnMismatch);
  EXPECT_ERROR_CODE(LoadDataset("/nonexistent/file.csv", 31),
                    ErrorCode::kIoError);
}

TEST(GenData, SeededExampleMatchesOracle) {
  const auto g = GenData(42, 100, 100, 20, 2, 31);
  const auto client = ParseDataset(g.client_csv, 31);
  const auto server = ParseDataset(g.server_csv, 31);
  EXPECT_EQ(client.size(), 100u);
  EXPECT_EQ(server.size(), 100u);
  const auto a = IdSet(client);
  size_t shared = 0;
  for (const auto& id : Identifiers(server)) shared += a.count(id);
  EXPECT_EQ(shared, 20u);

  const auto spec = FullSpec(2);
  const auto r = oracle::IntersectionStats(client, Identifiers(server), spec);
  EXPECT_EQ(r.cardinality, 20u);
  EXPECT_EQ(g.expected, FormatResult(r.cardinality, r.aggregates, spec));
  EXPECT_EQ(g.expected.rfind("cardinality=20\n", 0), 0u);
}

TEST(GenData, EmptyIntersection) {
  const auto g = GenData(1, 30, 40, 0, 1, 31);
  EXPECT_EQ(g.expected, "cardinality=0\ncol0.sum=0\ncol0.sumsq=0\n");
  const auto a = IdSet(ParseDataset(g.client_csv, 31));
  for (const auto& id : Identifiers(ParseDataset(g.server_csv, 31))) {
    EXPECT_EQ(a.count(id), 0u);
  }
}

TEST(GenData, Preconditions) {
  EXPECT_ERROR_CODE(GenData(1, 100, 100, 101, 1, 31),
                    ErrorCode::kInfeasibleParams);
  EXPECT_ERROR_CODE(GenData(1, 100, 50, 51, 1, 31),
                    ErrorCode::kInfeasibleParams);
  EXPECT_ERROR_CODE(GenData(1, 10, 10, 1, 1, 0), ErrorCode::kInfeasibleParams);
  EXPECT_ERROR_CODE(GenData(1, 10, 10, 1, 5, 31), ErrorCode::kInfeasibleParams);
  EXPECT_NO_THROW(GenData(1, 10, 10, 10, 4, 1));
}

TEST(GenData, ReproducibleBytes) {
  const auto a = GenData(42, 100, 100, 20, 2, 31);
  const auto b = GenData(42, 100, 100, 20, 2, 31);
  EXPECT_EQ(a.client_csv, b.client_csv);
  EXPECT_EQ(a.server_csv, b.server_csv);
  EXPECT_EQ(a.expected, b.expected);
  EXPECT_NE(GenData(43, 100, 100, 20, 2, 31).client_csv, a.client_csv);

  const auto dir1 = testing::MakeTempDir("gendata1");
  const auto dir2 = testing::MakeTempDir("gendata2");
  WriteGeneratedData(a, dir1);
  WriteGeneratedData(b, dir2);
  for (const char* f : {"client.csv", "server.csv", "expected.txt"}) {
    EXPECT_EQ(ReadFile(dir1 / f), ReadFile(dir2 / f)) << f;
  }
  EXPECT_EQ(LoadDataset(dir1 / "client.csv", 31).size(), 100u);
}

TEST(GenData, ValuesRespectBound) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const uint64_t bound = 1 + seed * 3;
    const auto g = GenData(seed, 50, 10, 5, 3, bound);
    EXPECT_NO_THROW(ParseDataset(g.client_csv, bound));
  }
}

TEST(FormatResult, Layout) {
  using protocol::Operator;
  const auto spec = protocol::AggregationSpec::Create(
      {{1, Operator::kSumOfSquares}, {0, Operator::kSum}});
  EXPECT_EQ(FormatResult(2, {{{0, Operator::kSum}, 12},
                             {{1, Operator::kSumOfSquares}, 74}},
                         spec),
            "cardinality=2\ncol1.sumsq=74\ncol0.sum=12\n");
}

}  // namespace
}  // namespace jingbing::dataset
