#ifndef TLINK_CORPUS_H_
#define TLINK_CORPUS_H_

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tlink/relation.h"

namespace tlink {

struct Token {
  int index = 0;  // 1-based
  std::string form;
  std::string lemma;
  std::string pos;  // Penn Treebank tag when available
  int head = 0;     // 0 = root
  std::string deprel;
};

// A dependency-parsed sentence whose head links form a single rooted tree.
class ParsedSentence {
 public:
  ParsedSentence() = default;

  // Validates the token list and throws StructureError if it is not a tree.
  ParsedSentence(std::string id, std::vector<Token> tokens);

  const std::string &id() const { return id_; }
  int size() const { return static_cast<int>(tokens_.size()); }
  bool Contains(int index) const { return index >= 1 && index <= size(); }

  // 1-based access.
  const Token &token(int index) const { return tokens_.at(index - 1); }
  const std::vector<Token> &tokens() const { return tokens_; }

  int root() const { return root_; }

  // Children of `index` in ascending order; index 0 yields the root.
  const std::vector<int> &children(int index) const {
    return children_.at(index);
  }

 private:
  std::string id_;
  std::vector<Token> tokens_;
  std::vector<std::vector<int>> children_;
  int root_ = 0;
};

// Two in-sentence event mentions with e1 < e2 (surface order).
struct EventPair {
  std::string sentence;
  int e1 = 0;
  int e2 = 0;
  Relation relation = Relation::kSimultaneous;

  friend bool operator==(const EventPair &, const EventPair &) = default;
};

struct Corpus {
  std::map<std::string, ParsedSentence> sentences;
  std::vector<EventPair> pairs;

  const ParsedSentence &SentenceOf(const EventPair &pair) const;
};

// Reads CoNLL-U. Multi-word-token ranges ("1-2") and empty nodes ("1.1") are
// skipped. POS is XPOS, falling back to UPOS when XPOS is "_". Sentence ids
// come from "# sent_id =" comments, otherwise "s1", "s2", ... in order.
std::vector<ParsedSentence> ParseConllu(std::string_view text);

// Orders a pair by surface position, inverting the relation when swapped.
// Throws InvalidPairError when e1 == e2.
EventPair NormalizePair(std::string sentence, int e1, int e2, Relation r);

// Loads the JSON pairs file and the CoNLL-U sentences file. Every pair is
// normalized to surface order.
Corpus LoadCorpus(const std::filesystem::path &pairs_path,
                  const std::filesystem::path &conllu_path);

// Same as LoadCorpus over in-memory contents.
Corpus BuildCorpus(std::string_view pairs_json, std::string_view conllu_text);

struct SplitRatios {
  double train = 0.7;
  double validate = 0.1;
  double test = 0.2;
};

struct CorpusSplit {
  Corpus train;
  Corpus validate;
  Corpus test;
};

// Stratified split: each relation's pairs are put in canonical order,
// shuffled with the seeded generator and cut by largest-remainder rounding.
// All three parts share the full sentence map.
CorpusSplit SplitCorpus(const Corpus &corpus, const SplitRatios &ratios,
                        uint64_t seed);

// Pair order used wherever results must not depend on input order.
bool CanonicalLess(const EventPair &a, const EventPair &b);

// Per-relation counts in class-id order.
std::array<int, kNumRelations> RelationCounts(const std::vector<EventPair> &pairs);

}  // namespace tlink

#endif  // TLINK_CORPUS_H_
