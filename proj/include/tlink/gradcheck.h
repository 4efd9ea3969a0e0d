#ifndef TLINK_GRADCHECK_H_
#define TLINK_GRADCHECK_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tlink/network.h"

namespace tlink {

struct TensorCheck {
  std::string name;
  int checked = 0;
  double max_relative_error = 0.0;
};

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::vector<TensorCheck> tensors;
};

struct GradCheckOptions {
  double epsilon = 1e-5;
  // Entries checked per tensor; 0 checks every entry.
  int sample_per_tensor = 0;
  uint64_t sample_seed = 1;
  // Dropout masks are re-drawn from this seed for every evaluation, so the
  // loss is a deterministic function of the parameters.
  bool training = false;
  uint64_t dropout_seed = 7;
  // Evaluate the finite-difference losses in long double. In plain double the
  // difference quotient carries roundoff near 1e-11, which dominates the
  // relative error of gradient entries below about 1e-7.
  bool extended_precision = true;
  // Optional hook applied to the analytic gradient before comparison (used to
  // inject faults in tests).
  std::function<void(Network &)> corrupt;
};

// Compares analytic gradients with central differences,
// |a - n| / max(|a|, |n|, 1e-8). Throws ConfigError for epsilon <= 0.
GradCheckResult GradCheck(const Network &net, const NetworkInput &input,
                          int target, const GradCheckOptions &options = {});

}  // namespace tlink

#endif  // TLINK_GRADCHECK_H_
