// Copyright 2026 The DGM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "dgm/correlation.h"
#include "dgm/csv.h"
#include "dgm/encoding.h"
#include "dgm/error.h"
#include "dgm/rng.h"
#include "dgm/split.h"
#include "test_util.h"

namespace dgm {
namespace {

const char* kSchema = R"({"age": {"kind": "numerical"},
                          "sex": {"kind": "categorical", "categories": ["f", "m"]}})";

DataTable Parse(const std::string& csv, const char* schema = kSchema) {
  std::istringstream in(csv);
  return ReadCsv(in, ParseSchema(schema));
}

TEST(LoadCsv, ParsesSmallFile) {
  const DataTable t = Parse("age,sex\n31,f\n45.5,m\n60,f\n");
  EXPECT_EQ(t.num_rows(), 3u);
  EXPECT_EQ(t.num_cols(), 2u);
  EXPECT_DOUBLE_EQ(t.value(1, 0), 45.5);
  EXPECT_EQ(t.column(1).codes, (std::vector<int32_t>{0, 1, 0}));
}

TEST(LoadCsv, HeaderOnlyGivesEmptyTable) {
  const DataTable t = Parse("age,sex\n");
  EXPECT_EQ(t.num_rows(), 0u);
  EXPECT_EQ(t.num_cols(), 2u);
}

TEST(LoadCsv, BadNumberNamesRowAndColumn) {
  try {
    Parse("age,sex\nabc,f\n");
    FAIL() << "expected an error";
  } catch (const DataError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("row 1"), std::string::npos) << msg;
    EXPECT_NE(msg.find("\"age\""), std::string::npos) << msg;
  }
}

TEST(LoadCsv, RejectsMissingColumnUnknownCategoryAndEmptyCell) {
  EXPECT_THROW(Parse("age\n31\n"), DataError);
  EXPECT_THROW(Parse("age,sex\n31,x\n"), DataError);
  EXPECT_THROW(Parse("age,sex\n,f\n"), DataError);
  EXPECT_THROW(Parse("age,sex,extra\n1,f,2\n"), DataError);
}

TEST(LoadCsv, InfersCategoriesAndHandlesQuotes) {
  const char* schema = R"({"city": {"kind": "categorical"}, "v": {"kind": "numerical"}})";
  const DataTable t = Parse("v,city\n1,\"Oslo, NO\"\n2,Bergen\n3,\"Oslo, NO\"\n", schema);
  EXPECT_EQ(t.column_names(), (std::vector<std::string>{"v", "city"}));
  EXPECT_EQ(t.meta(1).categories, (std::vector<std::string>{"Bergen", "Oslo, NO"}));
  EXPECT_EQ(t.column(1).codes, (std::vector<int32_t>{1, 0, 1}));
}

TEST(LoadCsv, RoundTripIsExact) {
  SeededRng rng(5);
  std::vector<double> v(200);
  for (double& x : v) x = rng.Normal() * std::pow(10.0, rng.Uniform(-8, 8));
  std::vector<int32_t> c(200);
  for (auto& x : c) x = static_cast<int32_t>(rng.UniformIndex(3));
  std::vector<Column> cols;
  cols.push_back(Column::Numerical("v", v));
  cols.push_back(Column::Categorical("c", {"a", "b,c", "d\"e"}, c));
  const DataTable t(std::move(cols));
  std::ostringstream out;
  WriteCsv(t, out);
  std::istringstream in(out.str());
  const DataTable back = ReadCsv(in, ParseSchema(SchemaToString(t)));
  ASSERT_EQ(back.num_rows(), t.num_rows());
  for (size_t r = 0; r < t.num_rows(); ++r) {
    EXPECT_EQ(back.value(r, 0), t.value(r, 0));
    EXPECT_EQ(back.column(1).codes[r], t.column(1).codes[r]);
  }
}

TEST(Split, TableOneSizes) {
  std::vector<double> v(2149, 1.0);
  const SplitPair s = Split(testing::NumericTable({v}), 0.2, 3);
  EXPECT_EQ(s.train.num_rows(), 1719u);
  EXPECT_EQ(s.holdout.num_rows(), 430u);
}

TEST(Split, DeterministicPerSeed) {
  std::vector<double> v(10);
  for (size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
  const DataTable t = testing::NumericTable({v});
  EXPECT_EQ(Split(t, 0.5, 11).holdout_rows, Split(t, 0.5, 11).holdout_rows);
}

TEST(Split, DisjointAndCovering) {
  std::vector<double> v(100);
  for (size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
  const SplitPair s = Split(testing::NumericTable({v}), 0.25, 4);
  EXPECT_EQ(s.holdout.num_rows(), 25u);
  EXPECT_EQ(s.train.num_rows(), 75u);
  std::set<size_t> all(s.train_rows.begin(), s.train_rows.end());
  for (size_t r : s.holdout_rows) EXPECT_TRUE(all.insert(r).second);
  EXPECT_EQ(all.size(), 100u);
  for (size_t i = 0; i < s.holdout_rows.size(); ++i) {
    EXPECT_EQ(s.holdout.value(i, 0), static_cast<double>(s.holdout_rows[i]));
  }
}

TEST(Split, DifferentSeedsDiffer) {
  std::vector<double> v(1000, 0.0);
  const DataTable t = testing::NumericTable({v});
  EXPECT_NE(Split(t, 0.3, 1).holdout_rows, Split(t, 0.3, 2).holdout_rows);
}

TEST(Split, Errors) {
  EXPECT_THROW(Split(testing::NumericTable({{1.0}}), 0.5, 1), DataError);
  EXPECT_THROW(Split(testing::NumericTable({{1.0, 2.0}}), 1.0, 1), Error);
}

TEST(MixedCorrelation, DiagonalAndBijection) {
  std::vector<Column> cols;
  cols.push_back(Column::Categorical("a", {"x", "y", "z"}, {0, 1, 2, 0, 1, 2, 2}));
  cols.push_back(Column::Categorical("b", {"p", "q", "r"}, {2, 0, 1, 2, 0, 1, 1}));
  cols.push_back(Column::Numerical("n", {1, 2, 3, 4, 5, 6, 8}));
  const Eigen::MatrixXd m = MixedCorrelation(DataTable(std::move(cols)));
  EXPECT_DOUBLE_EQ(m(2, 2), 1.0);
  EXPECT_NEAR(m(0, 1), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(m(0, 2), m(2, 0));
  EXPECT_GE(m(0, 2), 0.0);
  EXPECT_LE(m(0, 2), 1.0);
}

TEST(MixedCorrelation, PearsonMatchesDirectFormula) {
  const std::vector<double> x = {1.0, 2.5, 3.0, 4.5, 7.0, 8.0};
  const std::vector<double> y = {2.0, 1.0, 4.0, 3.5, 9.0, 6.0};
  double mx = 0, my = 0;
  for (size_t i = 0; i < 6; ++i) mx += x[i] / 6, my += y[i] / 6;
  double sxy = 0, sxx = 0, syy = 0;
  for (size_t i = 0; i < 6; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  const double oracle = sxy / std::sqrt(sxx * syy);
  const Eigen::MatrixXd m = MixedCorrelation(testing::NumericTable({x, y}));
  EXPECT_NEAR(m(0, 1), oracle, 1e-12);
  EXPECT_NEAR(m(1, 0), oracle, 1e-12);
}

TEST(MixedCorrelation, ZeroVarianceIsZeroAndDiagonalIsOne) {
  const Eigen::MatrixXd m =
      MixedCorrelation(testing::NumericTable({{1, 1, 1, 1}, {1, 2, 3, 5}}));
  EXPECT_EQ(m(0, 1), 0.0);
  EXPECT_EQ(m(0, 0), 1.0);
}

TEST(MixedCorrelation, CorrelationRatioOracle) {
  // Groups {0: 1,2,3}, {1: 7,8,9}: eta^2 = SS_between / SS_total.
  const std::vector<int32_t> g = {0, 0, 0, 1, 1, 1};
  const std::vector<double> v = {1, 2, 3, 7, 8, 9};
  const double mean = 5.0;
  const double between = 3 * (2 - mean) * (2 - mean) + 3 * (8 - mean) * (8 - mean);
  double total = 0;
  for (double x : v) total += (x - mean) * (x - mean);
  EXPECT_NEAR(CorrelationRatio(g, 2, v), std::sqrt(between / total), 1e-12);
}

TEST(MixedCorrelation, SymmetricUnitDiagonalProperty) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const Eigen::MatrixXd m = MixedCorrelation(testing::CorrelatedFixture(50, seed));
    EXPECT_LT((m - m.transpose()).cwiseAbs().maxCoeff(), 1e-15);
    for (Eigen::Index i = 0; i < m.rows(); ++i) EXPECT_EQ(m(i, i), 1.0);
    EXPECT_LE(m.cwiseAbs().maxCoeff(), 1.0 + 1e-12);
  }
}

TEST(MixedCorrelation, NeedsTwoRows) {
  EXPECT_THROW(MixedCorrelation(testing::NumericTable({{1.0}})), DataError);
}

TEST(SeededRng, StreamsAreReproducibleAndDistinct) {
  SeededRng a(42, 3), b(42, 3), c(42, 4);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const uint64_t x = a(), y = b(), z = c();
    EXPECT_EQ(x, y);
    differs = differs || x != z;
  }
  EXPECT_TRUE(differs);
}

TEST(SeededRng, PermutationAndIndexRange) {
  SeededRng rng(9);
  std::vector<size_t> p = rng.Permutation(50);
  std::sort(p.begin(), p.end());
  for (size_t i = 0; i < 50; ++i) EXPECT_EQ(p[i], i);
  for (int i = 0; i < 1000; ++i) EXPECT_LT(rng.UniformIndex(7), 7u);
}

TEST(Encoder, OneHotAndStandardize) {
  const DataTable t = testing::CorrelatedFixture(100, 1);
  const Encoder enc = Encoder::Fit(t);
  EXPECT_EQ(enc.dims(), 3u + 3u + 2u);
  const RowMatrix x = enc.Transform(t);
  EXPECT_NEAR(x.col(0).mean(), 0.0, 1e-12);
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    EXPECT_DOUBLE_EQ(x(r, 3) + x(r, 4) + x(r, 5), 1.0);
  }
}

TEST(DataTable, RejectsInvalidColumns) {
  std::vector<Column> cols;
  cols.push_back(Column::Numerical("a", {1, 2}));
  cols.push_back(Column::Numerical("b", {1}));
  EXPECT_THROW({ DataTable t(std::move(cols)); }, DataError);
  EXPECT_THROW(ColumnMeta::Categorical("c", {"x", "x"}).Validate(), DataError);
}

}  // namespace
}  // namespace dgm
