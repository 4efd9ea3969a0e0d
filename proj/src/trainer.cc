#include "tlink/trainer.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "tlink/error.h"
#include "tlink/rmsprop.h"

namespace tlink {

namespace {

struct Example {
  NetworkInput input;
  int target;
};

std::vector<Example> PrepareExamples(const TemporalModel &model,
                                     const Corpus &corpus) {
  std::vector<EventPair> pairs = corpus.pairs;
  std::stable_sort(pairs.begin(), pairs.end(), CanonicalLess);
  std::vector<Example> examples;
  examples.reserve(pairs.size());
  for (const EventPair &pair : pairs) {
    examples.push_back({model.Prepare(corpus.SentenceOf(pair), pair),
                        RelationId(pair.relation)});
  }
  return examples;
}

double ExamplesAccuracy(const TemporalModel &model,
                        const std::vector<Example> &examples) {
  if (examples.empty()) return std::numeric_limits<double>::quiet_NaN();
  int correct = 0;
  for (const Example &ex : examples) {
    correct += ArgMax(model.Forward(ex.input)) == ex.target;
  }
  return static_cast<double>(correct) / examples.size();
}

double ExamplesLoss(const TemporalModel &model,
                    const std::vector<Example> &examples) {
  double total = 0.0;
  for (const Example &ex : examples) {
    total += CrossEntropy(model.Forward(ex.input), ex.target);
  }
  return examples.empty() ? 0.0 : total / examples.size();
}

// Seeds for independent streams derived from the model seed.
constexpr uint64_t kShuffleStream = 0x53485546464c45ULL;
constexpr uint64_t kDropoutStream = 0x44524f504f5554ULL;

}  // namespace

TrainResult TrainModel(TemporalModel model, const Corpus &train, const Corpus &val,
                       const TrainOptions &options) {
  if (train.pairs.empty()) throw ConfigError("training set is empty");
  const ModelConfig &cfg = model.config();
  const std::vector<Example> train_examples = PrepareExamples(model, train);
  const std::vector<Example> val_examples = PrepareExamples(model, val);

  TrainResult result{model, model, 0, {}};
  auto record = [&](const EpochLog &entry) {
    result.log.push_back(entry);
    if (options.on_epoch) options.on_epoch(entry);
  };

  double best_accuracy = ExamplesAccuracy(model, val_examples);
  record({0, ExamplesLoss(model, train_examples), best_accuracy});
  if (!model.trainable()) {
    result.final_model = model;
    result.best_model = model;
    return result;
  }

  Rng shuffle_rng(cfg.seed ^ kShuffleStream);
  Rng dropout_rng(cfg.seed ^ kDropoutStream);
  Rmsprop optimizer(cfg.optimizer);
  Network &net = model.mutable_network();
  Network grad = net.ZerosLike();
  std::vector<size_t> order(train_examples.size());
  std::iota(order.begin(), order.end(), size_t{0});

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    shuffle_rng.Shuffle(std::span<size_t>(order));
    double epoch_loss = 0.0;
    for (size_t start = 0; start < order.size(); start += cfg.batch) {
      const size_t end = std::min(order.size(), start + static_cast<size_t>(cfg.batch));
      grad.SetZero();
      for (size_t k = start; k < end; ++k) {
        const Example &ex = train_examples[order[k]];
        epoch_loss += NetworkLossAndGradient(net, ex.input, ex.target, true,
                                             &dropout_rng, &grad);
      }
      const double scale = 1.0 / static_cast<double>(end - start);
      for (NamedTensor &t : grad.Tensors()) {
        for (double &g : t.values) g *= scale;
      }
      optimizer.Step(net, grad);
    }

    const double val_accuracy = ExamplesAccuracy(model, val_examples);
    record({epoch, epoch_loss / train_examples.size(), val_accuracy});
    if (!std::isnan(val_accuracy) &&
        (std::isnan(best_accuracy) || val_accuracy > best_accuracy)) {
      best_accuracy = val_accuracy;
      result.best_model = model;
      result.best_epoch = epoch;
    }
    if (options.stop_at_train_accuracy > 0.0 &&
        ExamplesAccuracy(model, train_examples) >= options.stop_at_train_accuracy) {
      break;
    }
  }
  result.final_model = std::move(model);
  if (val_examples.empty()) {
    result.best_model = result.final_model;
    result.best_epoch = result.log.back().epoch;
  }
  return result;
}

TrainResult Train(const ModelConfig &cfg, const Corpus &train, const Corpus &val,
                  std::shared_ptr<const EmbeddingTable> embeddings,
                  Lexicons lexicons, const TrainOptions &options) {
  if (train.pairs.empty()) throw ConfigError("training set is empty");
  return TrainModel(
      TemporalModel::Create(cfg, train, std::move(embeddings), std::move(lexicons)),
      train, val, options);
}

double Accuracy(const TemporalModel &model, const Corpus &corpus) {
  return ExamplesAccuracy(model, PrepareExamples(model, corpus));
}

double MeanLoss(const TemporalModel &model, const Corpus &corpus) {
  return ExamplesLoss(model, PrepareExamples(model, corpus));
}

std::string FormatTrainingLog(const std::vector<EpochLog> &log) {
  std::string out = "epoch,train_loss,val_accuracy\n";
  char line[96];
  for (const EpochLog &e : log) {
    if (std::isnan(e.val_accuracy)) {
      std::snprintf(line, sizeof line, "%d,%.12f,nan\n", e.epoch, e.train_loss);
    } else {
      std::snprintf(line, sizeof line, "%d,%.12f,%.6f\n", e.epoch, e.train_loss,
                    e.val_accuracy);
    }
    out += line;
  }
  return out;
}

}  // namespace tlink
