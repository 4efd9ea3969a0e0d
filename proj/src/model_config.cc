#include "tlink/model_config.h"

#include "tlink/error.h"

namespace tlink {

namespace {

constexpr std::pair<Architecture, std::string_view> kArchNames[] = {
    {Architecture::kSequenceModel, "sequence_model"},
    {Architecture::kBaseline1, "baseline1"},
    {Architecture::kBaseline2, "baseline2"},
    {Architecture::kBaseline3, "baseline3"},
    {Architecture::kMajority, "majority"},
};

Architecture ArchitectureFromName(std::string_view name) {
  for (const auto &[arch, n] : kArchNames) {
    if (n == name) return arch;
  }
  throw ConfigError("unknown architecture '" + std::string(name) + "'");
}

}  // namespace

std::string_view ArchitectureName(Architecture a) {
  for (const auto &[arch, n] : kArchNames) {
    if (arch == a) return n;
  }
  return "unknown";
}

ModelConfig ModelConfig::FromPreset(std::string_view name) {
  ModelConfig cfg;
  auto sequences = [&](bool pos, bool dep, bool word) {
    cfg.use_pos = pos;
    cfg.use_dep = dep;
    cfg.use_word = word;
  };
  if (name == "full") {
    sequences(true, true, true);
  } else if (name == "pos") {
    sequences(true, false, false);
  } else if (name == "dep") {
    sequences(false, true, false);
  } else if (name == "word") {
    sequences(false, false, true);
  } else if (name == "pos+word" || name == "word+pos") {
    sequences(true, false, true);
  } else if (name == "dep+word" || name == "word+dep") {
    sequences(false, true, true);
  } else if (name == "dep+pos" || name == "pos+dep") {
    sequences(true, true, false);
  } else if (name == "baseline1") {
    cfg.architecture = Architecture::kBaseline1;
  } else if (name == "baseline2") {
    cfg.architecture = Architecture::kBaseline2;
  } else if (name == "baseline3") {
    cfg.architecture = Architecture::kBaseline3;
  } else if (name == "majority") {
    cfg.architecture = Architecture::kMajority;
  } else {
    throw ConfigError("unknown architecture '" + std::string(name) + "'");
  }
  return cfg;
}

bool ModelConfig::NeedsEmbeddings() const {
  switch (architecture) {
    case Architecture::kSequenceModel: return use_word;
    case Architecture::kBaseline2:
    case Architecture::kBaseline3: return true;
    default: return false;
  }
}

void ModelConfig::Validate() const {
  if (architecture == Architecture::kSequenceModel &&
      !(use_pos || use_dep || use_word)) {
    throw ConfigError("a sequence model needs at least one sequence");
  }
  if (pos_width <= 0 || dep_width <= 0 || word_width <= 0 || window_width <= 0) {
    throw ConfigError("layer widths must be positive");
  }
  for (double rate : {pos_dropout, dep_dropout, word_dropout, window_dropout}) {
    if (rate < 0.0 || rate >= 1.0) throw ConfigError("dropout must be in [0, 1)");
  }
  if (window < 0) throw ConfigError("window width must be nonnegative");
  if (epochs < 0) throw ConfigError("epochs must be nonnegative");
  if (batch <= 0) throw ConfigError("batch size must be positive");
  if (embedding_dim <= 0) throw ConfigError("embedding dimension must be positive");
  if (feature_min_count < 1) throw ConfigError("feature min count must be >= 1");
  if (!(optimizer.learning_rate > 0.0) || optimizer.rho < 0.0 ||
      optimizer.rho >= 1.0 || !(optimizer.epsilon > 0.0)) {
    throw ConfigError("invalid rmsprop hyperparameters");
  }
}

nlohmann::json ModelConfig::ToJson() const {
  return {
      {"architecture", ArchitectureName(architecture)},
      {"use_pos", use_pos},
      {"use_dep", use_dep},
      {"use_word", use_word},
      {"bidirectional", bidirectional},
      {"use_rules", use_rules},
      {"pos_width", pos_width},
      {"dep_width", dep_width},
      {"word_width", word_width},
      {"pos_dropout", pos_dropout},
      {"dep_dropout", dep_dropout},
      {"word_dropout", word_dropout},
      {"window", window},
      {"window_width", window_width},
      {"window_dropout", window_dropout},
      {"feature_min_count", feature_min_count},
      {"epochs", epochs},
      {"batch", batch},
      {"seed", seed},
      {"learning_rate", optimizer.learning_rate},
      {"rho", optimizer.rho},
      {"epsilon", optimizer.epsilon},
      {"zero_output_init", zero_output_init},
      {"embeddings_path", embeddings_path},
      {"embedding_dim", embedding_dim},
  };
}

ModelConfig ModelConfig::FromJson(const nlohmann::json &j) {
  ModelConfig cfg;
  try {
    cfg.architecture = ArchitectureFromName(j.at("architecture").get<std::string>());
    j.at("use_pos").get_to(cfg.use_pos);
    j.at("use_dep").get_to(cfg.use_dep);
    j.at("use_word").get_to(cfg.use_word);
    j.at("bidirectional").get_to(cfg.bidirectional);
    j.at("use_rules").get_to(cfg.use_rules);
    j.at("pos_width").get_to(cfg.pos_width);
    j.at("dep_width").get_to(cfg.dep_width);
    j.at("word_width").get_to(cfg.word_width);
    j.at("pos_dropout").get_to(cfg.pos_dropout);
    j.at("dep_dropout").get_to(cfg.dep_dropout);
    j.at("word_dropout").get_to(cfg.word_dropout);
    j.at("window").get_to(cfg.window);
    j.at("window_width").get_to(cfg.window_width);
    j.at("window_dropout").get_to(cfg.window_dropout);
    j.at("feature_min_count").get_to(cfg.feature_min_count);
    j.at("epochs").get_to(cfg.epochs);
    j.at("batch").get_to(cfg.batch);
    j.at("seed").get_to(cfg.seed);
    j.at("learning_rate").get_to(cfg.optimizer.learning_rate);
    j.at("rho").get_to(cfg.optimizer.rho);
    j.at("epsilon").get_to(cfg.optimizer.epsilon);
    j.at("zero_output_init").get_to(cfg.zero_output_init);
    j.at("embeddings_path").get_to(cfg.embeddings_path);
    j.at("embedding_dim").get_to(cfg.embedding_dim);
  } catch (const nlohmann::json::exception &e) {
    throw IncompatibleError(std::string("model config: ") + e.what());
  }
  return cfg;
}

}  // namespace tlink
