#include <cmath>

#include "doctest.h"
#include "support/fixtures.h"
#include "tlink/baseline_features.h"
#include "tlink/checkpoint.h"
#include "tlink/error.h"
#include "tlink/model.h"
#include "tlink/trainer.h"

using namespace tlink;
using tlink::testing::ReferenceSentence;

namespace {

constexpr int kDim = 8;

Corpus FixtureCorpus() {
  const std::string dir = std::string(TLINK_TEST_DATA) + "/extraction/";
  return LoadCorpus(dir + "pairs.json", dir + "sentences.conllu");
}

std::shared_ptr<EmbeddingTable> FixtureEmbeddings(const Corpus &c) {
  std::vector<std::string> words;
  for (const auto &[id, s] : c.sentences) {
    for (const Token &t : s.tokens()) words.push_back(t.form);
  }
  return tlink::testing::RandomEmbeddings(words, kDim, 3);
}

ModelConfig Preset(const std::string &name) {
  ModelConfig cfg = ModelConfig::FromPreset(name);
  cfg.embedding_dim = kDim;
  return cfg;
}

// Closed-form count for one LSTM layer.
long Lstm(long in, long hidden) { return 4 * hidden * (in + hidden + 1); }

}  // namespace

TEST_CASE("model widths and parameter counts") {
  const Corpus c = FixtureCorpus();
  const auto emb = FixtureEmbeddings(c);

  const TemporalModel full = TemporalModel::Create(Preset("full"), c, emb);
  const long P = full.vocabs().pos.size(), D = full.vocabs().dep.size();
  CHECK(full.ConcatWidth() == 400);
  CHECK(full.network().output.out() == 14);
  CHECK(full.network().layers.size() == 6);
  CHECK(full.ParameterCount() ==
        2 * Lstm(P, 50) + 2 * Lstm(D, 50) + 2 * Lstm(kDim, 100) + 14 * 401);

  ModelConfig uni = Preset("pos");
  uni.bidirectional = false;
  const TemporalModel pos_only = TemporalModel::Create(uni, c, emb);
  CHECK(pos_only.ConcatWidth() == 50);
  CHECK(pos_only.ParameterCount() == Lstm(P, 50) + 14 * 51);

  const TemporalModel dep_word = TemporalModel::Create(Preset("dep+word"), c, emb);
  CHECK(dep_word.ConcatWidth() == 300);
  CHECK(dep_word.ParameterCount() == 2 * Lstm(D, 50) + 2 * Lstm(kDim, 100) + 14 * 301);

  const TemporalModel b1 = TemporalModel::Create(Preset("baseline1"), c, nullptr);
  CHECK(b1.network().layers.empty());
  CHECK(b1.ConcatWidth() == b1.network().feature_width);
  CHECK(b1.ParameterCount() == 14 * (b1.ConcatWidth() + 1));

  const TemporalModel b2 = TemporalModel::Create(Preset("baseline2"), c, emb);
  const long P2 = b2.vocabs().pos.size();
  CHECK(b2.ConcatWidth() == 300);
  CHECK(b2.ParameterCount() == 2 * Lstm(P2, 50) + 2 * Lstm(kDim, 100) + 14 * 301);

  const TemporalModel b3 = TemporalModel::Create(Preset("baseline3"), c, emb);
  const long P3 = b3.vocabs().pos.size();
  CHECK(b3.ConcatWidth() == 600);
  CHECK(b3.network().layers.size() == 2);
  CHECK(b3.ParameterCount() == 2 * Lstm(kDim + P3, 150) + 14 * 601);

  const TemporalModel majority = TemporalModel::Create(Preset("majority"), c, nullptr);
  CHECK_FALSE(majority.trainable());
  CHECK(majority.ParameterCount() == 0);
}

TEST_CASE("config validation") {
  ModelConfig cfg;
  cfg.use_pos = cfg.use_dep = cfg.use_word = false;
  CHECK_THROWS_AS(cfg.Validate(), ConfigError);
  cfg = ModelConfig{};
  cfg.pos_width = 0;
  CHECK_THROWS_AS(cfg.Validate(), ConfigError);
  cfg = ModelConfig{};
  cfg.word_dropout = 1.0;
  CHECK_THROWS_AS(cfg.Validate(), ConfigError);
  CHECK_THROWS_AS(ModelConfig::FromPreset("bogus"), ConfigError);

  const ModelConfig full = ModelConfig::FromPreset("full");
  const ModelConfig back = ModelConfig::FromJson(full.ToJson());
  CHECK(back.ToJson() == full.ToJson());
  CHECK(full.pos_width == 50);
  CHECK(full.word_width == 100);
  CHECK(full.pos_dropout == 0.20);
  CHECK(full.word_dropout == 0.25);
  CHECK(full.epochs == 100);
  CHECK(full.batch == 100);

  // Word models need a table.
  const Corpus c = FixtureCorpus();
  CHECK_THROWS_AS(TemporalModel::Create(Preset("full"), c, nullptr), ConfigError);
}

TEST_CASE("baseline I features on the reference sentence") {
  Corpus c;
  c.sentences.emplace("ref", ReferenceSentence());
  c.pairs = {{"ref", 3, 6, Relation::kBefore}};
  Lexicons lex;
  lex.signal_words = {"before", "as soon as"};
  lex.verb_relations[{"invade", "arrive"}] = {"happens-before"};
  const Baseline1Featurizer f(Baseline1Featurizer::BuildVocabs(c, 1), lex);
  const Vector x = f.Featurize(c.sentences.at("ref"), c.pairs[0]);
  CHECK(x.size() == f.Width());

  const int b = f.BinaryOffset();
  using F = Baseline1Featurizer;
  CHECK(x(b + F::kHappensBefore) == 1.0);
  CHECK(x(b + F::kSimilar) == 0.0);
  CHECK(x(b + F::kSamePos) == 0.0);  // VBN vs VBD
  CHECK(x(b + F::kE1Root) == 1.0);
  CHECK(x(b + F::kE2Root) == 0.0);
  CHECK(x(b + F::kE1GovernsE2) == 1.0);
  CHECK(x(b + F::kE2GovernsE1) == 0.0);
  const Vocabulary &deprel = f.vocabs().deprel;
  for (int i = 0; i < deprel.size(); ++i) {
    CHECK(x(f.DirectDeprelOffset() + i) == (i == deprel.Id("advcl") ? 1.0 : 0.0));
  }
  CHECK(x(f.DistanceOffset()) == doctest::Approx(0.3));

  // Missing lexicons zero their blocks.
  const Baseline1Featurizer bare(Baseline1Featurizer::BuildVocabs(c, 1), Lexicons{});
  const Vector y = bare.Featurize(c.sentences.at("ref"), c.pairs[0]);
  CHECK(y(bare.BinaryOffset() + F::kHappensBefore) == 0.0);
  CHECK(y.size() == x.size() - 2);  // no signal-word columns

  // Both events VBD.
  const ParsedSentence s = tlink::testing::MakeSentence(
      "vbd", {{"He", "PRP", 2, "nsubj"}, {"left", "VBD", 0, "root"},
              {"and", "CC", 4, "cc"}, {"returned", "VBD", 2, "conj"}});
  Corpus c2;
  c2.sentences.emplace("vbd", s);
  c2.pairs = {{"vbd", 2, 4, Relation::kBefore}};
  const Baseline1Featurizer f2(Baseline1Featurizer::BuildVocabs(c2, 1), Lexicons{});
  const Vector z = f2.Featurize(s, c2.pairs[0]);
  CHECK(z(f2.BinaryOffset() + F::kSamePos) == 1.0);
  for (int i = 0; i < F::kNumBinary; ++i) {
    const double v = z(f2.BinaryOffset() + i);
    CHECK((v == 0.0 || v == 1.0));
  }
}

TEST_CASE("lexicon files") {
  tlink::testing::TempDir dir;
  const auto signals = dir.Write("signals.txt", "# signals\nbefore\n\nAs Soon As\n");
  CHECK(LoadSignalWords(signals) == std::set<std::string>{"before", "as soon as"});
  const auto verbs = dir.Write("verbs.txt", "invade\thappens-before\tarrive\nbuy\tsimilar\tpurchase\n");
  Lexicons lex;
  lex.verb_relations = LoadVerbRelations(verbs);
  CHECK(lex.VerbsRelated("arrive", "invade", "happens-before"));
  CHECK(lex.VerbsRelated("buy", "purchase", "similar"));
  CHECK_FALSE(lex.VerbsRelated("buy", "purchase", "happens-before"));
  const auto bad = dir.Write("bad.txt", "a\tstronger-than\tb\n");
  CHECK_THROWS_AS(LoadVerbRelations(bad), Error);
  CHECK(Lexicons::FromJson(lex.ToJson()).verb_relations == lex.verb_relations);
}

TEST_CASE("event windows") {
  const ParsedSentence s = ReferenceSentence();
  const EventWindows w = ExtractEventWindows(s, {"ref", 3, 6, Relation::kBefore});
  CHECK(w.e1_left == std::vector<int>{1, 2});
  CHECK(w.e1_right == std::vector<int>{4, 5, 6, 7});
  CHECK(w.e2_left == std::vector<int>{1, 2, 3, 4, 5});
  CHECK(w.e2_right == std::vector<int>{7});

  const EventWindows edge = ExtractEventWindows(s, {"ref", 1, 7, Relation::kBefore});
  CHECK(edge.e1_left.empty());
  CHECK(edge.e2_right.empty());

  std::vector<tlink::testing::Row> rows;
  for (int i = 1; i <= 40; ++i) rows.push_back({"w", "NN", i == 20 ? 0 : 20, i == 20 ? "root" : "dep"});
  const ParsedSentence long_s = tlink::testing::MakeSentence("long", rows);
  const EventWindows lw = ExtractEventWindows(long_s, {"long", 20, 21, Relation::kBefore});
  CHECK(lw.e1_left.size() == 19);
  CHECK(lw.e1_right.size() == 19);
  CHECK(lw.e1_left.front() == 1);
  CHECK(ExtractEventWindows(long_s, {"long", 20, 21, Relation::kBefore}, 5).e1_left.size() == 5);
}

TEST_CASE("forward and prediction") {
  const Corpus c = FixtureCorpus();
  const auto emb = FixtureEmbeddings(c);
  for (const char *name : {"full", "pos", "dep+word", "baseline1", "baseline2", "baseline3"}) {
    CAPTURE(name);
    const TemporalModel m = TemporalModel::Create(Preset(name), c, emb);
    for (const EventPair &pair : c.pairs) {
      const Vector p = m.Forward(m.Prepare(c.SentenceOf(pair), pair));
      CHECK(p.size() == 14);
      CHECK(std::abs(p.sum() - 1.0) < 1e-9);
      // Zero output layer: uniform output, lowest class id wins.
      CHECK((p.array() - 1.0 / 14).abs().maxCoeff() < 1e-15);
      CHECK(m.Predict(c.SentenceOf(pair), pair).relation == Relation::kSimultaneous);
    }
  }

  const TemporalModel majority = TemporalModel::Create(Preset("majority"), c, nullptr);
  CHECK(majority.majority() == Relation::kAfter);
  for (const EventPair &pair : c.pairs) {
    CHECK(majority.Predict(c.SentenceOf(pair), pair).relation == Relation::kAfter);
  }

  CHECK(ArgMax(Vector::Constant(4, 0.25)) == 0);
  CHECK(ArgMax(Eigen::Vector3d(0.2, 0.4, 0.4)) == 1);
}

TEST_CASE("minimal two-token sequences") {
  const Corpus c = FixtureCorpus();
  const TemporalModel m = TemporalModel::Create(Preset("full"), c, FixtureEmbeddings(c));
  ContextSequences seq;
  seq.words = {"Troops", "attacked"};
  seq.pos = {"NNS", "VBD"};
  seq.deps = {"nsubj", "root"};
  const Vector p = m.Forward(m.PrepareSequences(seq));
  CHECK(p.allFinite());
  CHECK(std::abs(p.sum() - 1.0) < 1e-9);
}

TEST_CASE("training log, determinism and checkpoints") {
  const Corpus c = FixtureCorpus();
  const auto emb = FixtureEmbeddings(c);
  const CorpusSplit split = SplitCorpus(c, {0.8, 0.2, 0.0}, 5);
  ModelConfig cfg = Preset("full");
  cfg.pos_width = cfg.dep_width = 6;
  cfg.word_width = 8;
  cfg.epochs = 6;
  cfg.batch = 4;
  cfg.seed = 31;

  const TrainResult a = Train(cfg, split.train, split.validate, emb);
  REQUIRE(a.log.size() == 7);
  CHECK(a.log[0].epoch == 0);
  CHECK(std::abs(a.log[0].train_loss - std::log(14.0)) < 1e-12);
  CHECK(a.log.back().train_loss < a.log[0].train_loss);

  const TrainResult b = Train(cfg, split.train, split.validate, emb);
  CHECK(a.log == b.log);
  CHECK(FormatTrainingLog(a.log) == FormatTrainingLog(b.log));
  CHECK(FormatTrainingLog(a.log).rfind("epoch,train_loss,val_accuracy\n", 0) == 0);

  Corpus reversed = split.train;
  std::reverse(reversed.pairs.begin(), reversed.pairs.end());
  CHECK(Train(cfg, reversed, split.validate, emb).log == a.log);

  ModelConfig other = cfg;
  other.seed = 32;
  CHECK_FALSE(Train(other, split.train, split.validate, emb).log == a.log);

  CHECK(a.best_epoch >= 0);
  CHECK(a.best_epoch <= cfg.epochs);
  double best = -1;
  for (const EpochLog &e : a.log) best = std::max(best, e.val_accuracy);
  CHECK(a.log[a.best_epoch].val_accuracy == best);
  CHECK(Accuracy(a.best_model, split.validate) == doctest::Approx(best));

  // Prediction ignores the dropout stream.
  const EventPair &pair = c.pairs[0];
  CHECK(a.final_model.Predict(c.SentenceOf(pair), pair).probs ==
        a.final_model.Predict(c.SentenceOf(pair), pair).probs);

  tlink::testing::TempDir dir;
  SaveCheckpoint(a.final_model, dir.path() / "model.json");
  TemporalModel loaded = LoadCheckpoint(dir.path() / "model.json");
  loaded.AttachEmbeddings(emb);
  CHECK(loaded.ParameterCount() == a.final_model.ParameterCount());
  for (const EventPair &p : c.pairs) {
    const Prediction x = a.final_model.Predict(c.SentenceOf(p), p);
    const Prediction y = loaded.Predict(c.SentenceOf(p), p);
    CHECK(x.relation == y.relation);
    CHECK((x.probs - y.probs).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK(MeanLoss(loaded, split.train) == MeanLoss(a.final_model, split.train));

  CHECK_THROWS_AS(loaded.AttachEmbeddings(tlink::testing::RandomEmbeddings({"a"}, kDim + 1, 1)),
                  IncompatibleError);

  nlohmann::json j = CheckpointToJson(a.final_model);
  j["version"] = kCheckpointVersion + 1;
  CHECK_THROWS_AS(CheckpointFromJson(j), IncompatibleError);
  j = CheckpointToJson(a.final_model);
  j["network"]["output"]["W"]["rows"] = 3;
  CHECK_THROWS_AS(CheckpointFromJson(j), IncompatibleError);
  CHECK_THROWS_AS(CheckpointFromJson(nlohmann::json::object()), IncompatibleError);

  CHECK_THROWS_AS(Train(cfg, Corpus{}, split.validate, emb), ConfigError);
}

TEST_CASE("every architecture trains and round-trips") {
  const Corpus c = FixtureCorpus();
  const auto emb = FixtureEmbeddings(c);
  for (const char *name : {"pos", "dep", "word", "dep+pos", "baseline1", "baseline2",
                           "baseline3", "majority"}) {
    const std::string arch = name;
    CAPTURE(arch);
    ModelConfig cfg = Preset(name);
    cfg.pos_width = cfg.dep_width = 3;
    cfg.word_width = 4;
    cfg.window_width = 4;
    cfg.epochs = 2;
    cfg.batch = 5;
    cfg.feature_min_count = 1;
    const TrainResult r = Train(cfg, c, Corpus{}, emb);
    // The majority model has no training loop.
    CHECK(r.log.size() == (arch == "majority" ? 1u : 3u));
    CHECK(std::isnan(r.log.back().val_accuracy));
    TemporalModel back = CheckpointFromJson(CheckpointToJson(r.final_model));
    if (cfg.NeedsEmbeddings()) back.AttachEmbeddings(emb);
    for (const EventPair &p : c.pairs) {
      CHECK(back.Predict(c.SentenceOf(p), p).probs == r.final_model.Predict(c.SentenceOf(p), p).probs);
    }
  }
}
