#ifndef TLINK_MODEL_CONFIG_H_
#define TLINK_MODEL_CONFIG_H_

#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"
#include "tlink/rmsprop.h"

namespace tlink {

enum class Architecture {
  kSequenceModel,  // LSTM encoders over dependency-path sequences
  kBaseline1,      // discrete features -> softmax
  kBaseline2,      // bi-LSTMs over the surface path (POS + words)
  kBaseline3,      // bi-LSTM event embeddings over context windows
  kMajority,
};

std::string_view ArchitectureName(Architecture a);

struct ModelConfig {
  Architecture architecture = Architecture::kSequenceModel;

  // Sequences encoded by a sequence model.
  bool use_pos = true;
  bool use_dep = true;
  bool use_word = true;
  bool bidirectional = true;
  // Off = direct dependency path without the comma and children rules.
  bool use_rules = true;

  int pos_width = 50;
  int dep_width = 50;
  int word_width = 100;
  double pos_dropout = 0.20;
  double dep_dropout = 0.20;
  double word_dropout = 0.25;

  // Baseline III.
  int window = 19;
  int window_width = 150;
  double window_dropout = 0.20;

  // Baseline I token/lemma vocabularies drop rarer entries.
  int feature_min_count = 2;

  int epochs = 100;
  int batch = 100;
  uint64_t seed = 1;
  RmspropConfig optimizer;
  // Output layer starts at zero so the untrained model predicts uniformly.
  bool zero_output_init = true;

  std::string embeddings_path;
  int embedding_dim = 100;

  // Named presets: full, pos, dep, word, pos+word, dep+word, dep+pos,
  // baseline1, baseline2, baseline3, majority. Throws ConfigError.
  static ModelConfig FromPreset(std::string_view name);

  bool NeedsEmbeddings() const;

  // Throws ConfigError on invariant violations.
  void Validate() const;

  nlohmann::json ToJson() const;
  static ModelConfig FromJson(const nlohmann::json &j);
};

}  // namespace tlink

#endif  // TLINK_MODEL_CONFIG_H_
