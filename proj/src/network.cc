#include "tlink/network.h"

#include "tlink/error.h"

namespace tlink {

int Network::ConcatWidth() const {
  int width = feature_width;
  for (const Channel &ch : channels) width += layers.at(ch.layer).hidden();
  return width;
}

int Network::ParameterCount() const {
  int count = output.ParameterCount();
  for (const LstmParams &layer : layers) count += layer.ParameterCount();
  return count;
}

Network Network::ZerosLike() const {
  Network zero = *this;
  zero.SetZero();
  return zero;
}

void Network::SetZero() {
  for (LstmParams &layer : layers) {
    layer.W.setZero();
    layer.U.setZero();
    layer.b.setZero();
  }
  output.W.setZero();
  output.b.setZero();
}

std::vector<NamedTensor> Network::Tensors() {
  std::vector<NamedTensor> tensors;
  auto add = [&](std::string name, auto &m) {
    tensors.push_back({std::move(name),
                       std::span<double>(m.data(), static_cast<size_t>(m.size()))});
  };
  for (size_t i = 0; i < layers.size(); ++i) {
    const std::string prefix = "lstm" + std::to_string(i) + ".";
    add(prefix + "W", layers[i].W);
    add(prefix + "U", layers[i].U);
    add(prefix + "b", layers[i].b);
  }
  add("output.W", output.W);
  add("output.b", output.b);
  return tensors;
}

void Network::Validate() const {
  if (dropouts.size() != layers.size()) {
    throw ShapeError("network: one dropout rate per layer required");
  }
  for (const LstmParams &layer : layers) {
    const int h = layer.hidden();
    if (h <= 0 || layer.in() <= 0 || layer.W.rows() != 4 * h ||
        layer.U.rows() != 4 * h || layer.b.size() != 4 * h) {
      throw ShapeError("network: inconsistent lstm layer shapes");
    }
  }
  for (const Channel &ch : channels) {
    if (ch.layer < 0 || ch.layer >= static_cast<int>(layers.size()) ||
        ch.slot < 0) {
      throw ShapeError("network: channel refers to a missing layer");
    }
  }
  if (output.in() != ConcatWidth() || output.b.size() != output.out()) {
    throw ShapeError("network: output layer expects " +
                     std::to_string(output.in()) + " inputs, concatenation is " +
                     std::to_string(ConcatWidth()));
  }
}

Vector NetworkForward(const Network &net, const NetworkInput &input,
                      bool training, Rng *rng, NetworkTrace *trace) {
  if (input.features.size() != net.feature_width) {
    throw ShapeError("network: feature block has " +
                     std::to_string(input.features.size()) + " values, expected " +
                     std::to_string(net.feature_width));
  }
  Vector concat(net.ConcatWidth());
  if (trace) {
    trace->channels.assign(net.channels.size(), {});
    trace->empty.assign(net.channels.size(), false);
  }
  int offset = 0;
  for (size_t k = 0; k < net.channels.size(); ++k) {
    const Channel &ch = net.channels[k];
    if (ch.slot >= static_cast<int>(input.slots.size())) {
      throw ShapeError("network: input has no slot " + std::to_string(ch.slot));
    }
    const LstmParams &layer = net.layers[ch.layer];
    const auto &seq = input.slots[ch.slot];
    if (seq.empty()) {
      concat.segment(offset, layer.hidden()).setZero();
      if (trace) trace->empty[k] = true;
    } else {
      concat.segment(offset, layer.hidden()) =
          LstmEncode(layer, seq, ch.reverse, net.dropouts[ch.layer], training,
                     rng, trace ? &trace->channels[k] : nullptr);
    }
    offset += layer.hidden();
  }
  concat.segment(offset, net.feature_width) = input.features;
  Vector probs = DenseSoftmax(net.output, concat);
  if (trace) {
    trace->concat = std::move(concat);
    trace->probs = probs;
  }
  return probs;
}

double NetworkLossAndGradient(const Network &net, const NetworkInput &input,
                              int target, bool training, Rng *rng,
                              Network *grad) {
  NetworkTrace trace;
  NetworkForward(net, input, training, rng, &trace);
  const double loss = CrossEntropy(trace.probs, target);

  Vector d_logits = trace.probs;
  d_logits[target] -= 1.0;
  grad->output.W.noalias() += d_logits * trace.concat.transpose();
  grad->output.b += d_logits;
  const Vector d_concat = net.output.W.transpose() * d_logits;

  int offset = 0;
  for (size_t k = 0; k < net.channels.size(); ++k) {
    const Channel &ch = net.channels[k];
    const int h = net.layers[ch.layer].hidden();
    if (!trace.empty[k]) {
      LstmBackward(net.layers[ch.layer], trace.channels[k],
                   d_concat.segment(offset, h), &grad->layers[ch.layer]);
    }
    offset += h;
  }
  return loss;
}

}  // namespace tlink
