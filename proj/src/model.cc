#include "tlink/model.h"

#include <algorithm>

#include "tlink/error.h"

namespace tlink {

namespace {

std::vector<EventPair> SortedPairs(const Corpus &corpus) {
  std::vector<EventPair> pairs = corpus.pairs;
  std::stable_sort(pairs.begin(), pairs.end(), CanonicalLess);
  return pairs;
}

void AddLayer(Network &net, int in, int hidden, double dropout) {
  net.layers.emplace_back(in, hidden);
  net.dropouts.push_back(dropout);
}

}  // namespace

int ArgMax(const Vector &v) {
  int best = 0;
  for (int i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

ModelVocabs BuildModelVocabs(const ModelConfig &cfg, const Corpus &train) {
  ModelVocabs vocabs;
  std::vector<std::vector<std::string>> pos, dep;
  for (const EventPair &pair : SortedPairs(train)) {
    const ParsedSentence &s = train.SentenceOf(pair);
    switch (cfg.architecture) {
      case Architecture::kSequenceModel: {
        ContextSequences seq = BuildSequences(s, pair, cfg.use_rules);
        pos.push_back(std::move(seq.pos));
        dep.push_back(std::move(seq.deps));
        break;
      }
      case Architecture::kBaseline2:
        pos.push_back(ExtractSurfacePath(s, pair).pos);
        break;
      case Architecture::kBaseline3: {
        const EventWindows w = ExtractEventWindows(s, pair, cfg.window);
        for (const auto *window : {&w.e1_left, &w.e1_right, &w.e2_left, &w.e2_right}) {
          std::vector<std::string> tags;
          for (int i : *window) tags.push_back(s.token(i).pos);
          pos.push_back(std::move(tags));
        }
        break;
      }
      default:
        break;
    }
  }
  vocabs.pos = Vocabulary::Build(pos);
  vocabs.dep = Vocabulary::Build(dep);
  if (cfg.architecture == Architecture::kBaseline1) {
    vocabs.baseline1 = Baseline1Featurizer::BuildVocabs(train, cfg.feature_min_count);
  }
  return vocabs;
}

TemporalModel TemporalModel::Build(const ModelConfig &cfg, ModelVocabs vocabs,
                                   std::shared_ptr<const EmbeddingTable> embeddings,
                                   Lexicons lexicons, Relation majority) {
  cfg.Validate();
  if (cfg.NeedsEmbeddings()) {
    if (!embeddings) throw ConfigError("this architecture needs word embeddings");
    if (embeddings->dim() != cfg.embedding_dim) {
      throw ConfigError("embedding table has dimension " +
                        std::to_string(embeddings->dim()) + ", config says " +
                        std::to_string(cfg.embedding_dim));
    }
  }

  TemporalModel model;
  model.config_ = cfg;
  model.majority_ = majority;
  model.embeddings_ = std::move(embeddings);
  Network &net = model.network_;
  const int emb_dim = cfg.embedding_dim;

  // Adds a forward (and optionally backward) encoder for the next slot.
  int slot = 0;
  auto add_encoder = [&](int in, int hidden, double dropout, bool both) {
    AddLayer(net, in, hidden, dropout);
    net.channels.push_back({slot, static_cast<int>(net.layers.size()) - 1, false});
    if (both) {
      AddLayer(net, in, hidden, dropout);
      net.channels.push_back({slot, static_cast<int>(net.layers.size()) - 1, true});
    }
    ++slot;
  };

  switch (cfg.architecture) {
    case Architecture::kSequenceModel:
      if (cfg.use_pos) {
        add_encoder(vocabs.pos.size(), cfg.pos_width, cfg.pos_dropout, cfg.bidirectional);
      }
      if (cfg.use_dep) {
        add_encoder(vocabs.dep.size(), cfg.dep_width, cfg.dep_dropout, cfg.bidirectional);
      }
      if (cfg.use_word) {
        add_encoder(emb_dim, cfg.word_width, cfg.word_dropout, cfg.bidirectional);
      }
      break;
    case Architecture::kBaseline2:
      add_encoder(vocabs.pos.size(), cfg.pos_width, cfg.pos_dropout, true);
      add_encoder(emb_dim, cfg.word_width, cfg.word_dropout, true);
      break;
    case Architecture::kBaseline3: {
      const int in = emb_dim + vocabs.pos.size();
      AddLayer(net, in, cfg.window_width, cfg.window_dropout);
      AddLayer(net, in, cfg.window_width, cfg.window_dropout);
      net.channels = {{0, 0, false}, {1, 1, true}, {2, 0, false}, {3, 1, true}};
      break;
    }
    case Architecture::kBaseline1:
      model.featurizer_ = Baseline1Featurizer(vocabs.baseline1, std::move(lexicons));
      net.feature_width = model.featurizer_.Width();
      break;
    case Architecture::kMajority:
      break;
  }
  if (cfg.architecture != Architecture::kBaseline1) {
    model.featurizer_ = Baseline1Featurizer({}, std::move(lexicons));
  }
  model.vocabs_ = std::move(vocabs);

  if (model.trainable()) {
    net.output = DenseParams(net.ConcatWidth(), kNumRelations);
    Rng rng(cfg.seed);
    for (LstmParams &layer : net.layers) layer.Initialize(rng);
    if (!cfg.zero_output_init) net.output.InitializeGlorot(rng);
    net.Validate();
  }
  return model;
}

TemporalModel TemporalModel::Create(const ModelConfig &cfg, const Corpus &train,
                                    std::shared_ptr<const EmbeddingTable> embeddings,
                                    Lexicons lexicons) {
  const auto counts = RelationCounts(train.pairs);
  const int majority = static_cast<int>(
      std::max_element(counts.begin(), counts.end()) - counts.begin());
  return Build(cfg, BuildModelVocabs(cfg, train), std::move(embeddings),
               std::move(lexicons), RelationFromId(majority));
}

void TemporalModel::AttachEmbeddings(
    std::shared_ptr<const EmbeddingTable> embeddings) {
  if (config_.NeedsEmbeddings() &&
      (!embeddings || embeddings->dim() != config_.embedding_dim)) {
    throw IncompatibleError("model expects " +
                            std::to_string(config_.embedding_dim) +
                            "-dimensional embeddings");
  }
  embeddings_ = std::move(embeddings);
}

const EmbeddingTable &TemporalModel::RequireEmbeddings() const {
  if (!embeddings_) throw IncompatibleError("model has no embedding table attached");
  return *embeddings_;
}

Vector TemporalModel::WordVector(const std::string &word) const {
  return RequireEmbeddings().Embed(word);
}

NetworkInput TemporalModel::PrepareSequences(const ContextSequences &seq) const {
  NetworkInput input;
  auto one_hots = [](const Vocabulary &vocab, const std::vector<std::string> &labels) {
    std::vector<Vector> out;
    out.reserve(labels.size());
    for (const std::string &label : labels) out.push_back(EncodeOneHot(vocab, label));
    return out;
  };
  auto words = [&](const std::vector<std::string> &forms) {
    std::vector<Vector> out;
    out.reserve(forms.size());
    for (const std::string &w : forms) out.push_back(WordVector(w));
    return out;
  };
  switch (config_.architecture) {
    case Architecture::kSequenceModel:
      if (config_.use_pos) input.slots.push_back(one_hots(vocabs_.pos, seq.pos));
      if (config_.use_dep) input.slots.push_back(one_hots(vocabs_.dep, seq.deps));
      if (config_.use_word) input.slots.push_back(words(seq.words));
      break;
    case Architecture::kBaseline2:
      input.slots.push_back(one_hots(vocabs_.pos, seq.pos));
      input.slots.push_back(words(seq.words));
      break;
    default:
      throw ConfigError("architecture " +
                        std::string(ArchitectureName(config_.architecture)) +
                        " does not consume context sequences");
  }
  return input;
}

NetworkInput TemporalModel::Prepare(const ParsedSentence &s,
                                    const EventPair &pair) const {
  switch (config_.architecture) {
    case Architecture::kSequenceModel:
      return PrepareSequences(BuildSequences(s, pair, config_.use_rules));
    case Architecture::kBaseline2:
      return PrepareSequences(ExtractSurfacePath(s, pair));
    case Architecture::kBaseline3: {
      NetworkInput input;
      const EventWindows w = ExtractEventWindows(s, pair, config_.window);
      const int dim = config_.embedding_dim;
      for (const auto *window : {&w.e1_left, &w.e1_right, &w.e2_left, &w.e2_right}) {
        std::vector<Vector> seq;
        for (int i : *window) {
          Vector x(dim + vocabs_.pos.size());
          x.head(dim) = WordVector(s.token(i).form);
          x.tail(vocabs_.pos.size()) = EncodeOneHot(vocabs_.pos, s.token(i).pos);
          seq.push_back(std::move(x));
        }
        input.slots.push_back(std::move(seq));
      }
      return input;
    }
    case Architecture::kBaseline1: {
      NetworkInput input;
      input.features = featurizer_.Featurize(s, pair);
      return input;
    }
    case Architecture::kMajority:
      return {};
  }
  return {};
}

Vector TemporalModel::Forward(const NetworkInput &input, bool training,
                              Rng *rng) const {
  if (!trainable()) {
    Vector probs = Vector::Zero(kNumRelations);
    probs[RelationId(majority_)] = 1.0;
    return probs;
  }
  return NetworkForward(network_, input, training, rng);
}

Prediction TemporalModel::Predict(const ParsedSentence &s,
                                  const EventPair &pair) const {
  Vector probs = Forward(Prepare(s, pair));
  return {RelationFromId(ArgMax(probs)), std::move(probs)};
}

}  // namespace tlink
