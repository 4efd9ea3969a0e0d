#ifndef TLINK_NETWORK_H_
#define TLINK_NETWORK_H_

#include <span>
#include <string>
#include <vector>

#include "tlink/dense.h"
#include "tlink/lstm.h"

namespace tlink {

// Binds one input sequence slot to an LSTM layer. Several channels may share
// a layer (its gradient is then the sum over uses).
struct Channel {
  int slot = 0;
  int layer = 0;
  bool reverse = false;

  friend bool operator==(const Channel &, const Channel &) = default;
};

// Input for one example: one vector sequence per slot plus an optional
// static feature block.
struct NetworkInput {
  std::vector<std::vector<Vector>> slots;
  Vector features;
};

struct NamedTensor {
  std::string name;
  std::span<double> values;
};

// The fixed graph family used by every trainable architecture: LSTM channels
// whose final hidden states are concatenated (in channel order, followed by
// the static feature block) into a softmax output layer.
class Network {
 public:
  std::vector<LstmParams> layers;
  std::vector<double> dropouts;  // input dropout per layer
  std::vector<Channel> channels;
  int feature_width = 0;
  DenseParams output;

  int ConcatWidth() const;
  int ParameterCount() const;

  // Same shapes, all zeros.
  Network ZerosLike() const;
  void SetZero();

  // Every trainable tensor, in a fixed order.
  std::vector<NamedTensor> Tensors();

  // Checks layer/channel/output shapes; throws ShapeError.
  void Validate() const;
};

struct NetworkTrace {
  std::vector<LstmTrace> channels;
  std::vector<bool> empty;  // channel had no input
  Vector concat;
  Vector probs;
};

// Class probabilities. Dropout is applied only when `training`. An empty
// slot sequence contributes a zero vector for its channel.
Vector NetworkForward(const Network &net, const NetworkInput &input,
                      bool training, Rng *rng, NetworkTrace *trace = nullptr);

// Forward + backward for one example. Adds dLoss/dParam into `grad` (which
// must have the network's shapes) and returns the loss.
double NetworkLossAndGradient(const Network &net, const NetworkInput &input,
                              int target, bool training, Rng *rng,
                              Network *grad);

}  // namespace tlink

#endif  // TLINK_NETWORK_H_
