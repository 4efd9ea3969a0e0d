#include "tlink/evalkit.h"

#include <cstdio>

#include "tlink/error.h"

namespace tlink {

namespace {

double SafeDiv(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

double Harmonic(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

// Short row labels for the table rendering.
std::string DisplayName(Relation r) {
  std::string name(RelationName(r));
  name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
  return name;
}

}  // namespace

ConfusionMatrix BuildConfusion(const std::vector<Relation> &gold,
                               const std::vector<Relation> &predicted) {
  if (gold.size() != predicted.size()) {
    throw ShapeError("gold and predicted label lists differ in length (" +
                     std::to_string(gold.size()) + " vs " +
                     std::to_string(predicted.size()) + ")");
  }
  if (gold.empty()) throw ShapeError("no examples to evaluate");
  ConfusionMatrix m{};
  for (size_t i = 0; i < gold.size(); ++i) {
    ++m[RelationId(gold[i])][RelationId(predicted[i])];
  }
  return m;
}

EvalReport ComputeMetrics(const ConfusionMatrix &confusion) {
  EvalReport report;
  report.confusion = confusion;
  std::array<long, kNumRelations> row_sum{}, col_sum{};
  long trace = 0;
  for (int g = 0; g < kNumRelations; ++g) {
    for (int p = 0; p < kNumRelations; ++p) {
      const long n = confusion[g][p];
      if (n < 0) throw ShapeError("negative confusion count");
      row_sum[g] += n;
      col_sum[p] += n;
      report.total += n;
      if (g == p) trace += n;
    }
  }
  if (report.total == 0) throw ShapeError("empty confusion matrix");
  report.accuracy = static_cast<double>(trace) / report.total;

  double sum_p = 0.0, sum_r = 0.0, sum_f = 0.0;
  for (int c = 0; c < kNumRelations; ++c) {
    ClassMetrics &m = report.per_class[c];
    m.precision = SafeDiv(confusion[c][c], col_sum[c]);
    m.recall = SafeDiv(confusion[c][c], row_sum[c]);
    m.f1 = Harmonic(m.precision, m.recall);
    m.support = row_sum[c];
    sum_p += m.precision;
    sum_r += m.recall;
    sum_f += m.f1;
  }
  report.macro_p = sum_p / kNumRelations;
  report.macro_r = sum_r / kNumRelations;
  report.macro_f = Harmonic(report.macro_p, report.macro_r);
  report.mean_class_f1 = sum_f / kNumRelations;
  return report;
}

nlohmann::json ReportToJson(const EvalReport &report) {
  nlohmann::json labels = nlohmann::json::array();
  nlohmann::json per_class = nlohmann::json::object();
  for (Relation r : AllRelations()) {
    const ClassMetrics &m = report.per_class[RelationId(r)];
    labels.push_back(RelationName(r));
    per_class[std::string(RelationName(r))] = {{"precision", m.precision},
                                               {"recall", m.recall},
                                               {"f1", m.f1},
                                               {"support", m.support}};
  }
  return {{"version", kReportVersion},
          {"labels", labels},
          {"total", report.total},
          {"accuracy", report.accuracy},
          {"macro_p", report.macro_p},
          {"macro_r", report.macro_r},
          {"macro_f", report.macro_f},
          {"mean_class_f1", report.mean_class_f1},
          {"per_class", per_class},
          {"confusion", report.confusion}};
}

EvalReport ReportFromJson(const nlohmann::json &j) {
  EvalReport report;
  try {
    if (j.at("version") != kReportVersion) {
      throw IncompatibleError("unsupported report version");
    }
    const auto &labels = j.at("labels");
    for (Relation r : AllRelations()) {
      if (labels.at(RelationId(r)) != RelationName(r)) {
        throw IncompatibleError("report uses a different label ordering");
      }
      const auto &m = j.at("per_class").at(std::string(RelationName(r)));
      ClassMetrics &c = report.per_class[RelationId(r)];
      c.precision = m.at("precision").get<double>();
      c.recall = m.at("recall").get<double>();
      c.f1 = m.at("f1").get<double>();
      c.support = m.at("support").get<long>();
    }
    report.confusion = j.at("confusion").get<ConfusionMatrix>();
    report.total = j.at("total").get<long>();
    report.accuracy = j.at("accuracy").get<double>();
    report.macro_p = j.at("macro_p").get<double>();
    report.macro_r = j.at("macro_r").get<double>();
    report.macro_f = j.at("macro_f").get<double>();
    report.mean_class_f1 = j.at("mean_class_f1").get<double>();
  } catch (const nlohmann::json::exception &e) {
    throw IncompatibleError(std::string("malformed report: ") + e.what());
  }
  return report;
}

std::string RenderReport(const EvalReport &report, ReportFormat format) {
  if (format == ReportFormat::kJson) return ReportToJson(report).dump(2);

  std::string out;
  char line[128];
  std::snprintf(line, sizeof line, "Accuracy: %.2f%% (%ld examples)\n\n",
                100.0 * report.accuracy, report.total);
  out += line;
  std::snprintf(line, sizeof line, "%-14s %6s %6s %6s %8s\n", "Relation", "P", "R",
                "F", "Support");
  out += line;
  for (Relation r : AllRelations()) {
    const ClassMetrics &m = report.per_class[RelationId(r)];
    std::snprintf(line, sizeof line, "%-14s %6.2f %6.2f %6.2f %8ld\n",
                  DisplayName(r).c_str(), m.precision, m.recall, m.f1, m.support);
    out += line;
  }
  std::snprintf(line, sizeof line, "%-14s %6.2f %6.2f %6.2f %8ld\n", "Macro Av.",
                report.macro_p, report.macro_r, report.macro_f, report.total);
  out += line;
  std::snprintf(line, sizeof line, "Mean class F1: %.4f\n", report.mean_class_f1);
  out += line;
  return out;
}

std::string ConfusionCsv(const ConfusionMatrix &confusion) {
  std::string out = "gold\\predicted";
  for (Relation r : AllRelations()) out += "," + std::string(RelationName(r));
  out += '\n';
  for (Relation g : AllRelations()) {
    out += RelationName(g);
    for (long n : confusion[RelationId(g)]) out += "," + std::to_string(n);
    out += '\n';
  }
  return out;
}

}  // namespace tlink
