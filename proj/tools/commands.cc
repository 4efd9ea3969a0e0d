#include "commands.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <tuple>

#include "CLI11.hpp"
#include "json.hpp"
#include "tlink/checkpoint.h"
#include "tlink/corpus.h"
#include "tlink/deppath.h"
#include "tlink/encoder.h"
#include "tlink/error.h"
#include "tlink/evalkit.h"
#include "tlink/model.h"
#include "tlink/trainer.h"

namespace tlink::cli {

namespace fs = std::filesystem;

namespace {

struct CorpusOptions {
  std::string pairs;
  std::string conllu;
};

struct ExtractOptions {
  CorpusOptions corpus;
  bool no_rules = false;
  bool surface_path = false;
  std::string out;
  uint64_t seed = 1;
};

struct TrainOptions {
  CorpusOptions corpus;
  std::string arch = "full";
  bool unidirectional = false;
  bool no_rules = false;
  std::string embeddings;
  int dim = 100;
  int epochs = 100;
  int batch = 100;
  double learning_rate = 0.001;
  int pos_width = 50;
  int dep_width = 50;
  int word_width = 100;
  std::vector<double> ratios = {0.7, 0.1, 0.2};
  std::string signal_words;
  std::string verb_relations;
  std::optional<uint64_t> seed;
  std::string out;
};

struct EvaluateOptions {
  CorpusOptions corpus;
  std::string checkpoint;
  std::string predictions;
  std::string split = "test";
  std::vector<double> ratios = {0.7, 0.1, 0.2};
  std::string embeddings;
  std::optional<uint64_t> seed;
  std::string out;
  std::string format = "table";
};

struct PredictOptions {
  CorpusOptions corpus;
  std::string checkpoint;
  std::string embeddings;
  std::string out;
  uint64_t seed = 1;
};

void AddCorpusOptions(CLI::App *cmd, CorpusOptions &opts) {
  cmd->add_option("--pairs", opts.pairs, "JSON event-pair file")->required();
  cmd->add_option("--conllu", opts.conllu, "CoNLL-U parsed sentences")->required();
}

void WriteFile(const fs::path &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << content;
}

void PrepareOutDir(const std::string &dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir);
}

SplitRatios ToRatios(const std::vector<double> &r) {
  if (r.size() != 3) throw ConfigError("--ratios takes train,validate,test");
  for (double x : r) {
    if (x < 0.0) throw ConfigError("split ratios must be nonnegative");
  }
  if (!(r[0] > 0.0)) throw ConfigError("the train ratio must be positive");
  return {r[0], r[1], r[2]};
}

nlohmann::json SequenceRecord(const ContextSequences &seq, const EventPair &pair) {
  return {{"sentence", pair.sentence},
          {"e1", pair.e1},
          {"e2", pair.e2},
          {"words", seq.words},
          {"pos", seq.pos},
          {"deps", seq.deps},
          {"relation", RelationName(pair.relation)}};
}

// Writes to DIR/name when an output directory is set, otherwise to `out`.
void Emit(const std::string &out_dir, const std::string &name,
          const std::string &content, std::ostream &out) {
  if (out_dir.empty()) {
    out << content;
  } else {
    PrepareOutDir(out_dir);
    WriteFile(fs::path(out_dir) / name, content);
  }
}

int RunExtract(const ExtractOptions &opts, std::ostream &out) {
  const Corpus corpus = LoadCorpus(opts.corpus.pairs, opts.corpus.conllu);
  std::string lines;
  for (const EventPair &pair : corpus.pairs) {
    const ParsedSentence &s = corpus.SentenceOf(pair);
    const ContextSequences seq = opts.surface_path
                                     ? ExtractSurfacePath(s, pair)
                                     : BuildSequences(s, pair, !opts.no_rules);
    lines += SequenceRecord(seq, pair).dump() + "\n";
  }
  Emit(opts.out, "sequences.jsonl", lines, out);
  return kOk;
}

std::shared_ptr<const EmbeddingTable> LoadEmbeddingsFor(const ModelConfig &cfg,
                                                        const std::string &override_path) {
  if (!cfg.NeedsEmbeddings()) return nullptr;
  const std::string path = override_path.empty() ? cfg.embeddings_path : override_path;
  if (path.empty()) throw ConfigError("--embeddings is required for this architecture");
  return std::make_shared<EmbeddingTable>(LoadEmbeddings(path, cfg.embedding_dim, cfg.seed));
}

int RunTrain(const TrainOptions &opts, const std::string &echo, std::ostream &out) {
  if (!opts.seed) throw ConfigError("--seed is required for train");
  if (opts.out.empty()) throw ConfigError("--out is required for train");

  ModelConfig cfg = ModelConfig::FromPreset(opts.arch);
  cfg.bidirectional = !opts.unidirectional;
  cfg.use_rules = !opts.no_rules;
  cfg.epochs = opts.epochs;
  cfg.batch = opts.batch;
  cfg.optimizer.learning_rate = opts.learning_rate;
  cfg.pos_width = opts.pos_width;
  cfg.dep_width = opts.dep_width;
  cfg.word_width = opts.word_width;
  cfg.embedding_dim = opts.dim;
  cfg.seed = *opts.seed;
  if (!opts.embeddings.empty()) {
    cfg.embeddings_path = fs::absolute(opts.embeddings).string();
  }
  cfg.Validate();

  const Corpus corpus = LoadCorpus(opts.corpus.pairs, opts.corpus.conllu);
  const CorpusSplit split = SplitCorpus(corpus, ToRatios(opts.ratios), cfg.seed);
  if (split.train.pairs.empty()) throw ConfigError("training split is empty");

  Lexicons lexicons;
  if (!opts.signal_words.empty()) lexicons.signal_words = LoadSignalWords(opts.signal_words);
  if (!opts.verb_relations.empty()) {
    lexicons.verb_relations = LoadVerbRelations(opts.verb_relations);
  }

  const auto embeddings = LoadEmbeddingsFor(cfg, "");
  const TrainResult result =
      Train(cfg, split.train, split.validate, embeddings, std::move(lexicons));

  PrepareOutDir(opts.out);
  const fs::path dir(opts.out);
  SaveCheckpoint(result.final_model, dir / "model_final.json");
  SaveCheckpoint(result.best_model, dir / "model_best.json");
  const nlohmann::json vocab = CheckpointToJson(result.final_model).at("vocab");
  WriteFile(dir / "vocab.json", vocab.dump(2) + "\n");
  WriteFile(dir / "train_log.csv", FormatTrainingLog(result.log));
  WriteFile(dir / "run_config.ini", echo);

  const EpochLog &last = result.log.back();
  out << "trained " << ArchitectureName(cfg.architecture) << " on "
      << split.train.pairs.size() << " pairs, " << last.epoch << " epochs\n";
  out << "final validation accuracy: "
      << (std::isnan(last.val_accuracy) ? std::string("n/a")
                                        : std::to_string(last.val_accuracy))
      << "\n";
  out << "best validation epoch: " << result.best_epoch << "\n";
  return kOk;
}

Corpus SelectSplit(const Corpus &corpus, const std::string &which,
                   const std::vector<double> &ratios, uint64_t seed) {
  if (which == "all") return corpus;
  const CorpusSplit split = SplitCorpus(corpus, ToRatios(ratios), seed);
  if (which == "test") return split.test;
  if (which == "validate") return split.validate;
  throw ConfigError("--split must be test, validate or all");
}

using PairKey = std::tuple<std::string, int, int>;

std::map<PairKey, Relation> ReadPredictions(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open predictions " + path);
  std::map<PairKey, Relation> preds;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      const EventPair p = NormalizePair(j.at("sentence").get<std::string>(),
                                        j.at("e1").get<int>(), j.at("e2").get<int>(),
                                        ParseRelation(j.at("relation").get<std::string>()));
      preds[{p.sentence, p.e1, p.e2}] = p.relation;
    } catch (const nlohmann::json::exception &e) {
      throw ParseError(std::string("predictions: ") + e.what(), line_no);
    }
  }
  return preds;
}

EvalReport EvaluateModel(const TemporalModel &model, const Corpus &test) {
  std::vector<Relation> gold, pred;
  for (const EventPair &pair : test.pairs) {
    gold.push_back(pair.relation);
    pred.push_back(model.Predict(test.SentenceOf(pair), pair).relation);
  }
  return ComputeMetrics(BuildConfusion(gold, pred));
}

void PrintReport(const std::string &title, const EvalReport &report,
                 const std::string &format, std::ostream &out) {
  if (format == "json") {
    out << RenderReport(report, ReportFormat::kJson) << "\n";
  } else {
    out << "== " << title << " ==\n" << RenderReport(report, ReportFormat::kTable);
  }
}

int RunEvaluate(const EvaluateOptions &opts, const std::string &echo,
                std::ostream &out) {
  if (opts.checkpoint.empty() == opts.predictions.empty()) {
    throw ConfigError("give exactly one of --checkpoint or --predictions");
  }
  if (opts.format != "table" && opts.format != "json") {
    throw ConfigError("--format must be table or json");
  }
  const Corpus corpus = LoadCorpus(opts.corpus.pairs, opts.corpus.conllu);

  std::vector<std::pair<std::string, EvalReport>> reports;
  if (!opts.predictions.empty()) {
    const Corpus test = SelectSplit(corpus, opts.split, opts.ratios, opts.seed.value_or(1));
    if (test.pairs.empty()) throw ConfigError("the " + opts.split + " split is empty");
    const auto preds = ReadPredictions(opts.predictions);
    std::vector<Relation> gold, pred;
    for (const EventPair &pair : test.pairs) {
      auto it = preds.find({pair.sentence, pair.e1, pair.e2});
      if (it == preds.end()) {
        throw IncompatibleError("no prediction for pair (" + pair.sentence + ", " +
                                std::to_string(pair.e1) + ", " +
                                std::to_string(pair.e2) + ")");
      }
      gold.push_back(pair.relation);
      pred.push_back(it->second);
    }
    reports.emplace_back("predictions", ComputeMetrics(BuildConfusion(gold, pred)));
  } else {
    std::vector<std::pair<std::string, fs::path>> checkpoints;
    if (fs::is_directory(opts.checkpoint)) {
      checkpoints = {{"final", fs::path(opts.checkpoint) / "model_final.json"},
                     {"best", fs::path(opts.checkpoint) / "model_best.json"}};
    } else {
      checkpoints = {{"model", opts.checkpoint}};
    }
    for (const auto &[name, path] : checkpoints) {
      TemporalModel model = LoadCheckpoint(path);
      model.AttachEmbeddings(LoadEmbeddingsFor(model.config(), opts.embeddings));
      const Corpus test = SelectSplit(corpus, opts.split, opts.ratios,
                                      opts.seed.value_or(model.config().seed));
      if (test.pairs.empty()) throw ConfigError("the " + opts.split + " split is empty");
      reports.emplace_back(name, EvaluateModel(model, test));
    }
  }

  for (const auto &[name, report] : reports) PrintReport(name, report, opts.format, out);
  if (!opts.out.empty()) {
    PrepareOutDir(opts.out);
    for (const auto &[name, report] : reports) {
      const std::string suffix = reports.size() > 1 ? "_" + name : "";
      WriteFile(fs::path(opts.out) / ("report" + suffix + ".json"),
                RenderReport(report, ReportFormat::kJson) + "\n");
      WriteFile(fs::path(opts.out) / ("confusion" + suffix + ".csv"),
                ConfusionCsv(report.confusion));
    }
    WriteFile(fs::path(opts.out) / "run_config.ini", echo);
  }
  return kOk;
}

int RunPredict(const PredictOptions &opts, std::ostream &out) {
  TemporalModel model = LoadCheckpoint(opts.checkpoint);
  model.AttachEmbeddings(LoadEmbeddingsFor(model.config(), opts.embeddings));
  const Corpus corpus = LoadCorpus(opts.corpus.pairs, opts.corpus.conllu);
  std::string lines;
  for (const EventPair &pair : corpus.pairs) {
    const Prediction p = model.Predict(corpus.SentenceOf(pair), pair);
    std::vector<double> probs(p.probs.data(), p.probs.data() + p.probs.size());
    lines += nlohmann::json{{"sentence", pair.sentence},
                            {"e1", pair.e1},
                            {"e2", pair.e2},
                            {"relation", RelationName(p.relation)},
                            {"probs", probs}}
                 .dump() +
             "\n";
  }
  Emit(opts.out, "predictions.jsonl", lines, out);
  return kOk;
}

// Resolved options of the selected subcommand, in the --config file format.
std::string ActiveConfig(const CLI::App &app) {
  const std::string prefix = app.get_subcommands().front()->get_name() + ".";
  std::istringstream all(app.config_to_str(true, false));
  std::string out, line;
  while (std::getline(all, line)) {
    if (line.rfind(prefix, 0) == 0) out += line + "\n";
  }
  return out;
}

}  // namespace

int Run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Temporal relation classification over dependency-path sequences",
               "tlink"};
  app.set_config("--config", "", "Read options from an INI/TOML file; flags win");
  app.require_subcommand(1);
  app.fallthrough();

  ExtractOptions extract_opts;
  auto *extract = app.add_subcommand("extract", "Write word/POS/dependency sequences");
  AddCorpusOptions(extract, extract_opts.corpus);
  extract->add_flag("--no-rules", extract_opts.no_rules,
                    "Direct dependency path (no comma/children rules)");
  extract->add_flag("--surface-path", extract_opts.surface_path,
                    "Use the token span between the events");
  extract->add_option("--out", extract_opts.out, "Output directory (default stdout)");
  extract->add_option("--seed", extract_opts.seed, "Random seed");

  TrainOptions train_opts;
  auto *train = app.add_subcommand("train", "Train a classifier");
  AddCorpusOptions(train, train_opts.corpus);
  train->add_option("--arch", train_opts.arch, "Architecture")
      ->check(CLI::IsMember({"full", "pos", "dep", "word", "pos+word", "dep+word",
                             "dep+pos", "baseline1", "baseline2", "baseline3",
                             "majority"}))
      ->capture_default_str();
  train->add_flag("--unidirectional", train_opts.unidirectional,
                  "Forward encoders only");
  train->add_flag("--no-rules", train_opts.no_rules, "Direct dependency path variant");
  train->add_option("--embeddings", train_opts.embeddings, "Pretrained vectors (text)");
  train->add_option("--dim", train_opts.dim, "Embedding dimension")->capture_default_str();
  train->add_option("--epochs", train_opts.epochs, "Epochs")->capture_default_str();
  train->add_option("--batch", train_opts.batch, "Batch size")->capture_default_str();
  train->add_option("--lr", train_opts.learning_rate, "rmsprop learning rate")
      ->capture_default_str();
  train->add_option("--pos-width", train_opts.pos_width)->capture_default_str();
  train->add_option("--dep-width", train_opts.dep_width)->capture_default_str();
  train->add_option("--word-width", train_opts.word_width)->capture_default_str();
  train->add_option("--ratios", train_opts.ratios, "train,validate,test")
      ->delimiter(',')
      ->expected(3)
      ->capture_default_str();
  train->add_option("--signal-words", train_opts.signal_words, "Signal word list");
  train->add_option("--verb-relations", train_opts.verb_relations,
                    "verb1<TAB>relation<TAB>verb2 lexicon");
  train->add_option("--seed", train_opts.seed, "Random seed (required)");
  train->add_option("--out", train_opts.out, "Output directory (required)");

  EvaluateOptions eval_opts;
  auto *evaluate = app.add_subcommand("evaluate", "Score a checkpoint or predictions");
  AddCorpusOptions(evaluate, eval_opts.corpus);
  evaluate->add_option("--checkpoint", eval_opts.checkpoint,
                       "Checkpoint file, or a train output directory (final + best)");
  evaluate->add_option("--predictions", eval_opts.predictions,
                       "JSONL predictions with sentence/e1/e2/relation");
  evaluate->add_option("--split", eval_opts.split, "test, validate or all")
      ->check(CLI::IsMember({"test", "validate", "all"}))
      ->capture_default_str();
  evaluate->add_option("--ratios", eval_opts.ratios, "train,validate,test")
      ->delimiter(',')
      ->expected(3)
      ->capture_default_str();
  evaluate->add_option("--embeddings", eval_opts.embeddings,
                       "Override the embedding path stored in the checkpoint");
  evaluate->add_option("--seed", eval_opts.seed,
                       "Split seed (default: the checkpoint's seed)");
  evaluate->add_option("--out", eval_opts.out, "Directory for report.json/confusion.csv");
  evaluate->add_option("--format", eval_opts.format, "table or json")
      ->capture_default_str();

  PredictOptions predict_opts;
  auto *predict = app.add_subcommand("predict", "Label every pair in a corpus");
  AddCorpusOptions(predict, predict_opts.corpus);
  predict->add_option("--checkpoint", predict_opts.checkpoint, "Checkpoint file")
      ->required();
  predict->add_option("--embeddings", predict_opts.embeddings,
                      "Override the embedding path stored in the checkpoint");
  predict->add_option("--out", predict_opts.out, "Output directory (default stdout)");
  predict->add_option("--seed", predict_opts.seed, "Random seed");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    const std::string echo = ActiveConfig(app);
    if (*extract) return RunExtract(extract_opts, out);
    if (*train) return RunTrain(train_opts, echo, out);
    if (*evaluate) return RunEvaluate(eval_opts, echo, out);
    if (*predict) return RunPredict(predict_opts, out);
  } catch (const IncompatibleError &e) {
    err << "error: " << e.what() << "\n";
    return kIncompatible;
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace tlink::cli
