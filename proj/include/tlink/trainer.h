#ifndef TLINK_TRAINER_H_
#define TLINK_TRAINER_H_

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "tlink/model.h"

namespace tlink {

struct EpochLog {
  int epoch = 0;
  // Epoch 0: loss of the untrained model. Later epochs: mean per-example loss
  // accumulated during the epoch (dropout on, before each batch's update).
  double train_loss = 0.0;
  double val_accuracy = 0.0;  // NaN when there is no validation data

  friend bool operator==(const EpochLog &, const EpochLog &) = default;
};

struct TrainResult {
  TemporalModel final_model;
  TemporalModel best_model;  // highest validation accuracy, earliest on ties
  int best_epoch = 0;
  std::vector<EpochLog> log;
};

struct TrainOptions {
  // Called after every logged epoch (epoch 0 is the untrained model).
  std::function<void(const EpochLog &)> on_epoch;
  // Stop early once training accuracy reaches this value (checked each
  // epoch); <= 0 disables. Used by sanity checks, not by the CLI.
  double stop_at_train_accuracy = 0.0;
};

// Trains with rmsprop on shuffled minibatches: per-example gradients are
// summed in batch order, averaged, and applied once per batch. Pairs are put
// in canonical order before the seeded shuffle, so results do not depend on
// the order of `train`. Epoch 0 records the untrained model's mean loss.
// Throws ConfigError for an empty training set.
TrainResult Train(const ModelConfig &cfg, const Corpus &train, const Corpus &val,
                  std::shared_ptr<const EmbeddingTable> embeddings,
                  Lexicons lexicons = {}, const TrainOptions &options = {});

// Same, starting from an already built model.
TrainResult TrainModel(TemporalModel model, const Corpus &train, const Corpus &val,
                       const TrainOptions &options = {});

double Accuracy(const TemporalModel &model, const Corpus &corpus);

// Mean cross-entropy with dropout off.
double MeanLoss(const TemporalModel &model, const Corpus &corpus);

// "epoch,train_loss,val_accuracy" CSV with fixed formatting.
std::string FormatTrainingLog(const std::vector<EpochLog> &log);

}  // namespace tlink

#endif  // TLINK_TRAINER_H_
