#ifndef TLINK_EVALKIT_H_
#define TLINK_EVALKIT_H_

#include <array>
#include <string>
#include <vector>

#include "json.hpp"
#include "tlink/relation.h"

namespace tlink {

// Rows are gold labels, columns predictions, both in class-id order.
using ConfusionMatrix = std::array<std::array<long, kNumRelations>, kNumRelations>;

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long support = 0;
};

struct EvalReport {
  ConfusionMatrix confusion{};
  long total = 0;
  double accuracy = 0.0;
  std::array<ClassMetrics, kNumRelations> per_class{};
  double macro_p = 0.0;
  double macro_r = 0.0;
  // Harmonic mean of macro_p and macro_r.
  double macro_f = 0.0;
  // Unweighted mean of the per-class F1 scores.
  double mean_class_f1 = 0.0;
};

inline constexpr int kReportVersion = 1;

// Throws ShapeError on length mismatch or empty input.
ConfusionMatrix BuildConfusion(const std::vector<Relation> &gold,
                               const std::vector<Relation> &predicted);

// Precision/recall/F default to 0 on a zero denominator and zero-support
// classes stay in the macro averages. Throws ShapeError for an empty matrix.
EvalReport ComputeMetrics(const ConfusionMatrix &confusion);

enum class ReportFormat { kJson, kTable };

std::string RenderReport(const EvalReport &report, ReportFormat format);

nlohmann::json ReportToJson(const EvalReport &report);
// Rebuilds a report from its JSON rendering.
EvalReport ReportFromJson(const nlohmann::json &j);

// Header row of labels, then one "gold,count..." row per gold label.
std::string ConfusionCsv(const ConfusionMatrix &confusion);

}  // namespace tlink

#endif  // TLINK_EVALKIT_H_
