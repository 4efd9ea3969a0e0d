#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "json.hpp"
#include "support/fixtures.h"
#include "tlink/encoder.h"
#include "tlink/error.h"
#include "tlink/evalkit.h"

using namespace tlink;

namespace {

double Round2(double x) { return std::round(x * 100.0) / 100.0; }

ConfusionMatrix ThreeClassFixture() {
  // Rows gold, columns predicted over simultaneous, before, after.
  ConfusionMatrix m{};
  m[0][0] = 5; m[0][1] = 1;
  m[1][0] = 2; m[1][1] = 3; m[1][2] = 1;
  m[2][1] = 1; m[2][2] = 4;
  return m;
}

}  // namespace

TEST_CASE("confusion matrix") {
  using R = Relation;
  const std::vector<R> gold = {R::kBefore, R::kAfter, R::kAfter, R::kIdentity};
  SUBCASE("gold equals prediction") {
    const ConfusionMatrix m = BuildConfusion(gold, gold);
    long total = 0;
    for (int i = 0; i < kNumRelations; ++i) {
      for (int j = 0; j < kNumRelations; ++j) {
        total += m[i][j];
        if (i != j) CHECK(m[i][j] == 0);
      }
    }
    CHECK(total == 4);
    CHECK(m[RelationId(R::kAfter)][RelationId(R::kAfter)] == 2);
  }
  SUBCASE("single example") {
    const ConfusionMatrix m = BuildConfusion({R::kBefore}, {R::kEnds});
    int nonzero = 0;
    for (const auto &row : m) nonzero += std::count_if(row.begin(), row.end(), [](long v) { return v != 0; });
    CHECK(nonzero == 1);
    CHECK(m[RelationId(R::kBefore)][RelationId(R::kEnds)] == 1);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(BuildConfusion(gold, {R::kBefore}), ShapeError);
    CHECK_THROWS_AS(BuildConfusion({}, {}), ShapeError);
    CHECK_THROWS_AS(ComputeMetrics(ConfusionMatrix{}), ShapeError);
  }
}

TEST_CASE("metrics on a hand-computed three-class fixture") {
  const EvalReport r = ComputeMetrics(ThreeClassFixture());
  CHECK(r.total == 17);
  CHECK(r.accuracy == doctest::Approx(12.0 / 17).epsilon(1e-12));
  const double p[3] = {5.0 / 7, 3.0 / 5, 4.0 / 5};
  const double rc[3] = {5.0 / 6, 1.0 / 2, 4.0 / 5};
  const double f[3] = {10.0 / 13, 6.0 / 11, 4.0 / 5};
  for (int c = 0; c < 3; ++c) {
    CHECK(std::abs(r.per_class[c].precision - p[c]) < 1e-9);
    CHECK(std::abs(r.per_class[c].recall - rc[c]) < 1e-9);
    CHECK(std::abs(r.per_class[c].f1 - f[c]) < 1e-9);
  }
  CHECK(r.per_class[0].support == 6);
  for (int c = 3; c < kNumRelations; ++c) {
    CHECK(r.per_class[c].precision == 0.0);
    CHECK(r.per_class[c].recall == 0.0);
    CHECK(r.per_class[c].f1 == 0.0);
  }
  const double mp = (p[0] + p[1] + p[2]) / 14, mr = (rc[0] + rc[1] + rc[2]) / 14;
  CHECK(std::abs(r.macro_p - mp) < 1e-9);
  CHECK(std::abs(r.macro_r - mr) < 1e-9);
  CHECK(std::abs(r.macro_f - 2 * mp * mr / (mp + mr)) < 1e-9);
  CHECK(std::abs(r.mean_class_f1 - (f[0] + f[1] + f[2]) / 14) < 1e-9);
}

TEST_CASE("accuracy is micro recall and order does not matter") {
  Rng rng(5);
  std::vector<Relation> gold, pred;
  for (int i = 0; i < 300; ++i) {
    gold.push_back(RelationFromId(static_cast<int>(rng.Below(kNumRelations))));
    pred.push_back(rng.Uniform() < 0.4 ? gold.back()
                                       : RelationFromId(static_cast<int>(rng.Below(kNumRelations))));
  }
  const EvalReport a = ComputeMetrics(BuildConfusion(gold, pred));
  long hits = 0;
  for (size_t i = 0; i < gold.size(); ++i) hits += gold[i] == pred[i];
  CHECK(a.accuracy == doctest::Approx(static_cast<double>(hits) / 300).epsilon(1e-15));

  std::vector<size_t> order(gold.size());
  std::iota(order.begin(), order.end(), 0);
  rng.Shuffle(std::span<size_t>(order));
  std::vector<Relation> g2, p2;
  for (size_t i : order) {
    g2.push_back(gold[i]);
    p2.push_back(pred[i]);
  }
  const EvalReport b = ComputeMetrics(BuildConfusion(g2, p2));
  CHECK(a.confusion == b.confusion);
  CHECK(a.macro_f == b.macro_f);
  for (const auto &c : a.per_class) {
    CHECK(c.precision >= 0.0);
    CHECK(c.precision <= 1.0);
    CHECK(c.recall <= 1.0);
    CHECK(c.f1 <= 1.0);
  }
}

TEST_CASE("majority baseline on the TimeBank test distribution") {
  const auto counts = tlink::testing::TimeBankTestCounts();
  std::vector<Relation> gold;
  for (int r = 0; r < kNumRelations; ++r) gold.insert(gold.end(), counts[r], RelationFromId(r));
  REQUIRE(gold.size() == 467);
  const std::vector<Relation> pred(gold.size(), Relation::kAfter);
  const EvalReport report = ComputeMetrics(BuildConfusion(gold, pred));
  // 120/467 = 25.696%; the reported figure drops the third decimal.
  CHECK(std::abs(report.accuracy - 0.2569) <= 0.0001);
  CHECK(report.accuracy == doctest::Approx(120.0 / 467).epsilon(1e-15));
}

TEST_CASE("per-class table of the best system") {
  // Reported values: after, before, simultaneous, identity, includes,
  // is_included, ended_by, during_inv, begun_by, begins, ibefore, iafter,
  // during, ends.
  struct Row {
    Relation r;
    double p, rc, f;
  };
  using R = Relation;
  const Row rows[] = {
      {R::kAfter, 0.62, 0.68, 0.65},     {R::kBefore, 0.56, 0.52, 0.53},
      {R::kSimultaneous, 0.44, 0.51, 0.47}, {R::kIdentity, 0.47, 0.56, 0.51},
      {R::kIncludes, 0.59, 0.39, 0.47},  {R::kIsIncluded, 0.5, 0.56, 0.53},
      {R::kEndedBy, 0.48, 0.63, 0.55},   {R::kDuringInv, 0, 0, 0},
      {R::kBegunBy, 0.75, 0.43, 0.55},   {R::kBegins, 1.0, 0.29, 0.44},
      {R::kIBefore, 0.4, 0.4, 0.4},      {R::kIAfter, 0.33, 0.25, 0.29},
      {R::kDuring, 0, 0, 0},             {R::kEnds, 0, 0, 0},
  };
  const EvalReport report = ComputeMetrics(tlink::testing::PerClassTableFixture());
  CHECK(report.total == 467);
  for (const Row &row : rows) {
    CAPTURE(RelationName(row.r));
    const ClassMetrics &m = report.per_class[RelationId(row.r)];
    CHECK(Round2(m.precision) == doctest::Approx(row.p));
    CHECK(Round2(m.recall) == doctest::Approx(row.rc));
    CHECK(std::abs(m.f1 - row.f) <= 0.01);
  }
  CHECK(Round2(report.macro_p) == doctest::Approx(0.44));
  CHECK(Round2(report.macro_r) == doctest::Approx(0.37));
  CHECK(Round2(report.macro_f) == doctest::Approx(0.40));
  // The unweighted mean of class F1 does not reproduce the macro row.
  CHECK(Round2(report.mean_class_f1) != doctest::Approx(0.40));
}

TEST_CASE("report rendering") {
  const EvalReport r = ComputeMetrics(ThreeClassFixture());
  SUBCASE("json round trip") {
    const std::string text = RenderReport(r, ReportFormat::kJson);
    const nlohmann::json j = nlohmann::json::parse(text);
    CHECK(j["version"] == kReportVersion);
    const EvalReport back = ReportFromJson(j);
    CHECK(back.confusion == r.confusion);
    CHECK(back.total == r.total);
    CHECK(back.accuracy == r.accuracy);
    CHECK(back.macro_p == r.macro_p);
    CHECK(back.macro_r == r.macro_r);
    CHECK(back.macro_f == r.macro_f);
    CHECK(back.mean_class_f1 == r.mean_class_f1);
    for (int c = 0; c < kNumRelations; ++c) {
      CHECK(back.per_class[c].precision == r.per_class[c].precision);
      CHECK(back.per_class[c].recall == r.per_class[c].recall);
      CHECK(back.per_class[c].f1 == r.per_class[c].f1);
      CHECK(back.per_class[c].support == r.per_class[c].support);
    }
  }
  SUBCASE("table for a diagonal confusion") {
    ConfusionMatrix m{};
    for (int c = 0; c < kNumRelations; ++c) m[c][c] = c + 1;
    const std::string table = Lowercase(RenderReport(ComputeMetrics(m), ReportFormat::kTable));
    for (Relation rel : AllRelations()) {
      CHECK(table.find(std::string(RelationName(rel))) != std::string::npos);
    }
    size_t ones = 0;
    for (size_t pos = table.find("1.00"); pos != std::string::npos; pos = table.find("1.00", pos + 1)) ++ones;
    CHECK(ones >= 3 * kNumRelations);
    CHECK(table.find("macro av.") != std::string::npos);
  }
  SUBCASE("zero-support rows render as zeros") {
    const std::string table = Lowercase(RenderReport(r, ReportFormat::kTable));
    const size_t row = table.find("during_inv");
    REQUIRE(row != std::string::npos);
    const std::string line = table.substr(row, table.find('\n', row) - row);
    CHECK(line.find("0.00") != std::string::npos);
    CHECK(line.find("1.00") == std::string::npos);
  }
  SUBCASE("confusion csv") {
    const std::string csv = ConfusionCsv(r.confusion);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == kNumRelations + 1);
    CHECK(csv.find("before,2,3,1,0") != std::string::npos);
  }
}
