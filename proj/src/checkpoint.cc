#include "tlink/checkpoint.h"

#include <fstream>

#include "tlink/error.h"

namespace tlink {

namespace {

constexpr char kFormat[] = "tlink-checkpoint";

nlohmann::json MatrixToJson(const Matrix &m) {
  std::vector<double> values;
  values.reserve(m.size());
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) values.push_back(m(r, c));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"values", values}};
}

void MatrixFromJson(const nlohmann::json &j, Matrix &m, const char *name) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto &values = j.at("values");
  if (rows != m.rows() || cols != m.cols() ||
      static_cast<Eigen::Index>(values.size()) != rows * cols) {
    throw IncompatibleError(std::string("checkpoint tensor ") + name +
                            " has the wrong shape");
  }
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = values[r * cols + c].get<double>();
  }
}

void VectorFromJson(const nlohmann::json &j, Vector &v, const char *name) {
  Matrix m(v.size(), 1);
  MatrixFromJson(j, m, name);
  v = m.col(0);
}

}  // namespace

nlohmann::json CheckpointToJson(const TemporalModel &model) {
  nlohmann::json labels = nlohmann::json::array();
  for (Relation r : AllRelations()) labels.push_back(RelationName(r));

  const Network &net = model.network();
  nlohmann::json layers = nlohmann::json::array();
  for (size_t i = 0; i < net.layers.size(); ++i) {
    const LstmParams &p = net.layers[i];
    layers.push_back({{"in", p.in()},
                      {"hidden", p.hidden()},
                      {"dropout", net.dropouts[i]},
                      {"W", MatrixToJson(p.W)},
                      {"U", MatrixToJson(p.U)},
                      {"b", MatrixToJson(p.b)}});
  }
  nlohmann::json channels = nlohmann::json::array();
  for (const Channel &ch : net.channels) {
    channels.push_back({{"slot", ch.slot}, {"layer", ch.layer}, {"reverse", ch.reverse}});
  }

  nlohmann::json j;
  j["format"] = kFormat;
  j["version"] = kCheckpointVersion;
  j["config"] = model.config().ToJson();
  j["labels"] = labels;
  j["majority"] = RelationName(model.majority());
  j["vocab"] = {{"pos", model.vocabs().pos.ToJson()},
                {"dep", model.vocabs().dep.ToJson()},
                {"baseline1", model.vocabs().baseline1.ToJson()}};
  j["lexicons"] = model.lexicons().ToJson();
  j["network"] = {{"layers", layers},
                  {"channels", channels},
                  {"feature_width", net.feature_width},
                  {"output", {{"W", MatrixToJson(net.output.W)},
                              {"b", MatrixToJson(net.output.b)}}}};
  if (const auto &emb = model.embeddings(); emb) {
    j["embeddings"] = {{"dim", emb->dim()}, {"entries", emb->size()}};
  }
  return j;
}

TemporalModel CheckpointFromJson(const nlohmann::json &j) {
  try {
    if (j.at("format") != kFormat) throw IncompatibleError("not a tlink checkpoint");
    if (j.at("version") != kCheckpointVersion) {
      throw IncompatibleError("unsupported checkpoint version " +
                              j.at("version").dump());
    }
    nlohmann::json labels = nlohmann::json::array();
    for (Relation r : AllRelations()) labels.push_back(RelationName(r));
    if (j.at("labels") != labels) {
      throw IncompatibleError("checkpoint uses a different label ordering");
    }

    const ModelConfig cfg = ModelConfig::FromJson(j.at("config"));
    ModelVocabs vocabs;
    vocabs.pos = Vocabulary::FromJson(j.at("vocab").at("pos"));
    vocabs.dep = Vocabulary::FromJson(j.at("vocab").at("dep"));
    vocabs.baseline1 = Baseline1Vocabs::FromJson(j.at("vocab").at("baseline1"));
    const Relation majority = ParseRelation(j.at("majority").get<std::string>());

    // Rebuild the graph from the config and vocabularies, then overwrite the
    // parameters; any structural disagreement is a shape mismatch below.
    std::shared_ptr<EmbeddingTable> placeholder;
    if (cfg.NeedsEmbeddings()) {
      placeholder = std::make_shared<EmbeddingTable>(cfg.embedding_dim, cfg.seed);
    }
    TemporalModel model = TemporalModel::Build(
        cfg, std::move(vocabs), placeholder,
        Lexicons::FromJson(j.at("lexicons")), majority);
    model.DetachEmbeddings();

    Network &net = model.mutable_network();
    const auto &jn = j.at("network");
    const auto &jl = jn.at("layers");
    if (jl.size() != net.layers.size() || jn.at("feature_width") != net.feature_width) {
      throw IncompatibleError("checkpoint network does not match its config");
    }
    for (size_t i = 0; i < net.layers.size(); ++i) {
      MatrixFromJson(jl[i].at("W"), net.layers[i].W, "W");
      MatrixFromJson(jl[i].at("U"), net.layers[i].U, "U");
      VectorFromJson(jl[i].at("b"), net.layers[i].b, "b");
      net.dropouts[i] = jl[i].at("dropout").get<double>();
    }
    std::vector<Channel> channels;
    for (const auto &ch : jn.at("channels")) {
      channels.push_back({ch.at("slot").get<int>(), ch.at("layer").get<int>(),
                          ch.at("reverse").get<bool>()});
    }
    if (channels != net.channels) {
      throw IncompatibleError("checkpoint channel layout does not match its config");
    }
    if (model.trainable()) {
      MatrixFromJson(jn.at("output").at("W"), net.output.W, "output.W");
      VectorFromJson(jn.at("output").at("b"), net.output.b, "output.b");
      net.Validate();
    }
    return model;
  } catch (const nlohmann::json::exception &e) {
    throw IncompatibleError(std::string("malformed checkpoint: ") + e.what());
  } catch (const ShapeError &e) {
    throw IncompatibleError(std::string("checkpoint: ") + e.what());
  } catch (const ConfigError &e) {
    throw IncompatibleError(std::string("checkpoint: ") + e.what());
  }
}

void SaveCheckpoint(const TemporalModel &model, const std::filesystem::path &path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << CheckpointToJson(model).dump() << '\n';
}

TemporalModel LoadCheckpoint(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open checkpoint " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error &e) {
    throw IncompatibleError(std::string("checkpoint is not valid JSON: ") + e.what());
  }
  return CheckpointFromJson(j);
}

}  // namespace tlink
