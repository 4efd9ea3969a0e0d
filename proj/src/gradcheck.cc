#include "tlink/gradcheck.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tlink/error.h"

namespace tlink {

namespace {

using XScalar = long double;
using XVector = Eigen::Matrix<XScalar, Eigen::Dynamic, 1>;
using XMatrix = Eigen::Matrix<XScalar, Eigen::Dynamic, Eigen::Dynamic>;

XScalar XSigmoid(XScalar x) { return 1.0L / (1.0L + std::exp(-x)); }

// Cross-entropy of the network output evaluated in extended precision. Same
// graph and dropout draw order as NetworkForward; the loss is taken as
// logsumexp(z) - z[target] so it stays smooth for tiny probabilities.
XScalar ExtendedLoss(const Network &net, const NetworkInput &input, int target,
                     bool training, Rng *rng) {
  XVector concat(net.ConcatWidth());
  int offset = 0;
  for (const Channel &ch : net.channels) {
    const LstmParams &p = net.layers[ch.layer];
    const int h = p.hidden();
    const auto &seq = input.slots.at(ch.slot);
    XVector h_t = XVector::Zero(h), c_t = XVector::Zero(h);
    const XMatrix W = p.W.cast<XScalar>(), U = p.U.cast<XScalar>();
    const XVector b = p.b.cast<XScalar>();
    const double rate = net.dropouts[ch.layer];
    const int steps = static_cast<int>(seq.size());
    for (int s = 0; s < steps; ++s) {
      XVector x = seq[ch.reverse ? steps - 1 - s : s].cast<XScalar>();
      if (training && rate > 0.0) {
        x = x.cwiseProduct(DropoutMask(p.in(), rate, *rng).cast<XScalar>());
      }
      const XVector a = W * x + U * h_t + b;
      const XVector i = a.segment(0, h).unaryExpr(&XSigmoid);
      const XVector f = a.segment(h, h).unaryExpr(&XSigmoid);
      const XVector g = a.segment(2 * h, h).array().tanh();
      const XVector o = a.segment(3 * h, h).unaryExpr(&XSigmoid);
      c_t = f.cwiseProduct(c_t) + i.cwiseProduct(g);
      h_t = o.cwiseProduct(c_t.array().tanh().matrix());
    }
    concat.segment(offset, h) = h_t;
    offset += h;
  }
  concat.segment(offset, net.feature_width) = input.features.cast<XScalar>();
  const XVector z = net.output.W.cast<XScalar>() * concat + net.output.b.cast<XScalar>();
  const XScalar top = z.maxCoeff();
  XScalar sum = 0.0L;
  for (int k = 0; k < z.size(); ++k) sum += std::exp(z[k] - top);
  return top + std::log(sum) - z[target];
}

}  // namespace

GradCheckResult GradCheck(const Network &net, const NetworkInput &input,
                          int target, const GradCheckOptions &options) {
  if (!(options.epsilon > 0.0)) {
    throw ConfigError("gradient check epsilon must be positive");
  }
  if (target < 0 || target >= net.output.out()) {
    throw ShapeError("gradient check target out of range");
  }
  auto loss_at = [&](const Network &n) -> XScalar {
    Rng rng(options.dropout_seed);
    if (options.extended_precision) {
      return ExtendedLoss(n, input, target, options.training, &rng);
    }
    return CrossEntropy(NetworkForward(n, input, options.training, &rng), target);
  };

  Network analytic = net.ZerosLike();
  {
    Rng rng(options.dropout_seed);
    NetworkLossAndGradient(net, input, target, options.training, &rng, &analytic);
  }
  if (options.corrupt) options.corrupt(analytic);

  Network probe = net;
  auto probe_tensors = probe.Tensors();
  auto grad_tensors = analytic.Tensors();
  Rng sampler(options.sample_seed);

  GradCheckResult result;
  for (size_t k = 0; k < probe_tensors.size(); ++k) {
    std::span<double> values = probe_tensors[k].values;
    std::vector<size_t> entries(values.size());
    std::iota(entries.begin(), entries.end(), size_t{0});
    if (options.sample_per_tensor > 0 &&
        entries.size() > static_cast<size_t>(options.sample_per_tensor)) {
      sampler.Shuffle(std::span<size_t>(entries));
      entries.resize(options.sample_per_tensor);
    }
    TensorCheck check{probe_tensors[k].name, 0, 0.0};
    for (size_t i : entries) {
      const double saved = values[i];
      // Divide by the step actually representable around `saved`.
      values[i] = saved + options.epsilon;
      const double up = values[i];
      const XScalar plus = loss_at(probe);
      values[i] = saved - options.epsilon;
      const double down = values[i];
      const XScalar minus = loss_at(probe);
      values[i] = saved;
      const double numeric =
          static_cast<double>((plus - minus) / (static_cast<XScalar>(up) - down));
      const double a = grad_tensors[k].values[i];
      const double denom = std::max({std::abs(a), std::abs(numeric), 1e-8});
      check.max_relative_error =
          std::max(check.max_relative_error, std::abs(a - numeric) / denom);
      ++check.checked;
    }
    result.max_relative_error =
        std::max(result.max_relative_error, check.max_relative_error);
    result.tensors.push_back(std::move(check));
  }
  return result;
}

}  // namespace tlink
