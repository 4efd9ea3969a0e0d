#ifndef TLINK_DENSE_H_
#define TLINK_DENSE_H_

#include "tlink/lstm.h"

namespace tlink {

struct DenseParams {
  Matrix W;  // out x in
  Vector b;  // out

  DenseParams() = default;
  DenseParams(int in, int out) : W(Matrix::Zero(out, in)), b(Vector::Zero(out)) {}

  int in() const { return static_cast<int>(W.cols()); }
  int out() const { return static_cast<int>(W.rows()); }
  int ParameterCount() const { return static_cast<int>(W.size() + b.size()); }

  void InitializeGlorot(Rng &rng);
};

// Numerically stable softmax (max-subtracted).
Vector Softmax(const Vector &logits);

// softmax(W x + b).
Vector DenseSoftmax(const DenseParams &p, const Vector &x);

// -log(max(pred[target], 1e-12)). Throws if target is out of range or pred is
// not a distribution within 1e-6.
double CrossEntropy(const Vector &pred, int target);

}  // namespace tlink

#endif  // TLINK_DENSE_H_
