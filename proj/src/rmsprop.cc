#include "tlink/rmsprop.h"

#include <cmath>

#include "tlink/error.h"

namespace tlink {

void Rmsprop::Step(size_t slot, std::span<double> params,
                   std::span<const double> grads) {
  if (params.size() != grads.size()) {
    throw ShapeError("rmsprop: parameter and gradient sizes differ");
  }
  if (slot >= caches_.size()) caches_.resize(slot + 1);
  std::vector<double> &cache = caches_[slot];
  if (cache.empty()) cache.assign(params.size(), 0.0);
  if (cache.size() != params.size()) {
    throw ShapeError("rmsprop: tensor shape changed between steps");
  }
  const double rho = config_.rho;
  for (size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    cache[i] = rho * cache[i] + (1.0 - rho) * g * g;
    params[i] -= config_.learning_rate * g / (std::sqrt(cache[i]) + config_.epsilon);
  }
}

void Rmsprop::Step(Network &net, Network &grad) {
  auto params = net.Tensors();
  auto grads = grad.Tensors();
  if (params.size() != grads.size()) {
    throw ShapeError("rmsprop: gradient does not match network");
  }
  for (size_t k = 0; k < params.size(); ++k) {
    Step(k, params[k].values, grads[k].values);
  }
}

}  // namespace tlink
