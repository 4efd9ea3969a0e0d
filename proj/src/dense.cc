#include "tlink/dense.h"

#include <algorithm>
#include <cmath>

#include "tlink/error.h"

namespace tlink {

void DenseParams::InitializeGlorot(Rng &rng) {
  const double limit = std::sqrt(6.0 / (in() + out()));
  for (int i = 0; i < W.size(); ++i) W.data()[i] = rng.Uniform(-limit, limit);
  b.setZero();
}

Vector Softmax(const Vector &logits) {
  // Scalar exp underflows to exactly 0 where the vectorized one clamps.
  const double top = logits.maxCoeff();
  Vector p = logits.unaryExpr([top](double v) { return std::exp(v - top); });
  return p / p.sum();
}

Vector DenseSoftmax(const DenseParams &p, const Vector &x) {
  if (x.size() != p.in()) {
    throw ShapeError("dense layer expects " + std::to_string(p.in()) +
                     " inputs, got " + std::to_string(x.size()));
  }
  return Softmax(p.W * x + p.b);
}

double CrossEntropy(const Vector &pred, int target) {
  if (target < 0 || target >= pred.size()) {
    throw ShapeError("target class " + std::to_string(target) +
                     " out of range for " + std::to_string(pred.size()) +
                     " classes");
  }
  if (std::abs(pred.sum() - 1.0) > 1e-6) {
    throw ShapeError("prediction is not a probability distribution");
  }
  return -std::log(std::max(pred[target], 1e-12));
}

}  // namespace tlink
