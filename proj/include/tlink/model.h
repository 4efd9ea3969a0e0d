#ifndef TLINK_MODEL_H_
#define TLINK_MODEL_H_

#include <memory>
#include <string>

#include "tlink/baseline_features.h"
#include "tlink/corpus.h"
#include "tlink/deppath.h"
#include "tlink/encoder.h"
#include "tlink/model_config.h"
#include "tlink/network.h"
#include "tlink/relation.h"

namespace tlink {

// Label vocabularies fixed from the training split.
struct ModelVocabs {
  Vocabulary pos;
  Vocabulary dep;
  Baseline1Vocabs baseline1;
};

ModelVocabs BuildModelVocabs(const ModelConfig &cfg, const Corpus &train);

struct Prediction {
  Relation relation;
  Vector probs;
};

// A temporal relation classifier of any supported architecture: the network
// plus everything needed to turn an (sentence, pair) into network input.
class TemporalModel {
 public:
  // Assembles the network for `cfg`. Sequence models get one LSTM per
  // selected sequence and direction; baseline2 encodes the surface path with
  // POS/word bi-LSTMs; baseline3 runs a shared forward and a shared backward
  // LSTM over both events' context windows; baseline1 feeds discrete features
  // straight into the softmax layer. Parameters are initialized from
  // cfg.seed. Throws ConfigError.
  static TemporalModel Build(const ModelConfig &cfg, ModelVocabs vocabs,
                             std::shared_ptr<const EmbeddingTable> embeddings,
                             Lexicons lexicons = {},
                             Relation majority = Relation::kAfter);

  // Vocabularies and the majority label from `train`, then Build.
  static TemporalModel Create(const ModelConfig &cfg, const Corpus &train,
                              std::shared_ptr<const EmbeddingTable> embeddings,
                              Lexicons lexicons = {});

  const ModelConfig &config() const { return config_; }
  const ModelVocabs &vocabs() const { return vocabs_; }
  const Lexicons &lexicons() const { return featurizer_.lexicons(); }
  Relation majority() const { return majority_; }
  const Network &network() const { return network_; }
  Network &mutable_network() { return network_; }
  const std::shared_ptr<const EmbeddingTable> &embeddings() const {
    return embeddings_;
  }

  // Replaces the embedding table; throws IncompatibleError on a dimension
  // mismatch.
  void AttachEmbeddings(std::shared_ptr<const EmbeddingTable> embeddings);
  void DetachEmbeddings() { embeddings_.reset(); }

  bool trainable() const { return config_.architecture != Architecture::kMajority; }
  int ConcatWidth() const { return network_.ConcatWidth(); }
  int ParameterCount() const { return network_.ParameterCount(); }

  NetworkInput Prepare(const ParsedSentence &s, const EventPair &pair) const;
  // Sequence models and baseline2 only.
  NetworkInput PrepareSequences(const ContextSequences &seq) const;

  // Probabilities over the 14 relations in class-id order.
  Vector Forward(const NetworkInput &input, bool training = false,
                 Rng *rng = nullptr) const;

  // Argmax with ties going to the lowest class id; dropout off.
  Prediction Predict(const ParsedSentence &s, const EventPair &pair) const;

 private:
  const EmbeddingTable &RequireEmbeddings() const;
  Vector WordVector(const std::string &word) const;

  ModelConfig config_;
  ModelVocabs vocabs_;
  Baseline1Featurizer featurizer_;
  Network network_;
  Relation majority_ = Relation::kAfter;
  std::shared_ptr<const EmbeddingTable> embeddings_;
};

// Argmax with ties broken by the lowest index.
int ArgMax(const Vector &v);

}  // namespace tlink

#endif  // TLINK_MODEL_H_
