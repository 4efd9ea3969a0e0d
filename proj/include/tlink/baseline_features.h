#ifndef TLINK_BASELINE_FEATURES_H_
#define TLINK_BASELINE_FEATURES_H_

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "tlink/corpus.h"
#include "tlink/encoder.h"
#include "tlink/lstm.h"

namespace tlink {

// Optional lexical resources for the discrete-feature baseline. Either part
// may be empty, which zeroes the corresponding features.
struct Lexicons {
  // Lowercased; multi-word signals are space separated ("as soon as").
  std::set<std::string> signal_words;
  // (verb1, verb2) -> relations from {"happens-before", "similar"}.
  std::map<std::pair<std::string, std::string>, std::set<std::string>> verb_relations;

  // True if the lexicon links the two lemmas with `relation`, in either order.
  bool VerbsRelated(const std::string &a, const std::string &b,
                    const std::string &relation) const;

  nlohmann::json ToJson() const;
  static Lexicons FromJson(const nlohmann::json &j);
};

// One word or phrase per line; blank lines and '#' comments ignored.
std::set<std::string> LoadSignalWords(const std::filesystem::path &path);

// "verb1 <TAB> relation <TAB> verb2" per line.
std::map<std::pair<std::string, std::string>, std::set<std::string>>
LoadVerbRelations(const std::filesystem::path &path);

// Vocabularies behind the one-hot blocks of the feature vector.
struct Baseline1Vocabs {
  Vocabulary pos;
  Vocabulary deprel;
  Vocabulary token;
  Vocabulary lemma;
  Vocabulary preposition;

  nlohmann::json ToJson() const;
  static Baseline1Vocabs FromJson(const nlohmann::json &j);
};

// Discrete lexico-syntactic features for an event pair, laid out as:
//   pos(e1) pos(e2) | deprel(e1) deprel(e2) | token(e1) token(e2) |
//   lemma(e1) lemma(e2) | child-deprel bags of e1, e2 |
//   7 binaries (verb happens-before, verb similar, same POS, e1 root,
//   e2 root, e1 governs e2, e2 governs e1) | deprel between e1 and e2 when
//   directly linked | prepositions of e1, e2 | signal words between the
//   events | (e2 - e1) / 10
class Baseline1Featurizer {
 public:
  static constexpr int kNumBinary = 7;
  enum Binary {
    kHappensBefore = 0,
    kSimilar,
    kSamePos,
    kE1Root,
    kE2Root,
    kE1GovernsE2,
    kE2GovernsE1,
  };

  Baseline1Featurizer() = default;
  Baseline1Featurizer(Baseline1Vocabs vocabs, Lexicons lexicons);

  // Vocabularies from the training pairs; token and lemma entries seen fewer
  // than `min_count` times fall back to UNK.
  static Baseline1Vocabs BuildVocabs(const Corpus &train, int min_count);

  int Width() const;
  Vector Featurize(const ParsedSentence &s, const EventPair &pair) const;

  // Offset of the binary block (for tests and inspection).
  int BinaryOffset() const;
  int DirectDeprelOffset() const { return BinaryOffset() + kNumBinary; }
  int DistanceOffset() const { return Width() - 1; }

  const Baseline1Vocabs &vocabs() const { return vocabs_; }
  const Lexicons &lexicons() const { return lexicons_; }

 private:
  Baseline1Vocabs vocabs_;
  Lexicons lexicons_;
  std::vector<std::string> signal_list_;  // sorted
};

// Lowercased forms of prepositions attached to a token: IN/TO children or
// case/mark dependents, plus an IN/TO head.
std::vector<std::string> PrepositionsOf(const ParsedSentence &s, int index);

// Context windows for the event-embedding baseline: up to `width` tokens on
// each side of each event, event token excluded, in surface order. The
// right windows are consumed by a reverse-direction LSTM.
struct EventWindows {
  std::vector<int> e1_left;
  std::vector<int> e1_right;
  std::vector<int> e2_left;
  std::vector<int> e2_right;
};

EventWindows ExtractEventWindows(const ParsedSentence &s, const EventPair &pair,
                                 int width = 19);

}  // namespace tlink

#endif  // TLINK_BASELINE_FEATURES_H_
