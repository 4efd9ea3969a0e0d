#ifndef TLINK_RMSPROP_H_
#define TLINK_RMSPROP_H_

#include <span>
#include <vector>

#include "tlink/network.h"

namespace tlink {

struct RmspropConfig {
  double learning_rate = 0.001;
  double rho = 0.9;
  double epsilon = 1e-8;
};

// Running mean-square of each gradient:
//   cache <- rho*cache + (1-rho)*g^2
//   param <- param - lr*g / (sqrt(cache) + eps)
class Rmsprop {
 public:
  explicit Rmsprop(RmspropConfig config = {}) : config_(config) {}

  const RmspropConfig &config() const { return config_; }

  // Updates one flat tensor. `slot` identifies its cache, which is created on
  // first use.
  void Step(size_t slot, std::span<double> params, std::span<const double> grads);

  // Updates every tensor of `net` from the same-shaped `grad`.
  void Step(Network &net, Network &grad);

  const std::vector<std::vector<double>> &caches() const { return caches_; }

 private:
  RmspropConfig config_;
  std::vector<std::vector<double>> caches_;
};

}  // namespace tlink

#endif  // TLINK_RMSPROP_H_
