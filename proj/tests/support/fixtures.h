#ifndef TLINK_TESTS_SUPPORT_FIXTURES_H_
#define TLINK_TESTS_SUPPORT_FIXTURES_H_

#include <array>
#include <filesystem>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "tlink/corpus.h"
#include "tlink/encoder.h"
#include "tlink/evalkit.h"
#include "tlink/rng.h"

namespace tlink::testing {

// "Kuwait was invaded before troops arrived ." with heads [3,3,0,6,6,3,3].
extern const char kReferenceConllu[];

ParsedSentence ReferenceSentence();

// CoNLL-U line helper: id, form, xpos, head, deprel (lemma = lowercased form).
std::string ConlluLine(int id, const std::string &form, const std::string &xpos,
                       int head, const std::string &deprel);

// Sentence built from (form, xpos, head, deprel) rows.
struct Row {
  std::string form;
  std::string pos;
  int head;
  std::string deprel;
};
ParsedSentence MakeSentence(const std::string &id, const std::vector<Row> &rows);

// Random tree over n nodes: node i > 1 attaches to a uniformly chosen
// earlier node after a random relabeling.
ParsedSentence RandomTree(Rng &rng, int n, const std::string &id = "rand");

// Independent oracle: BFS shortest path on the undirected tree, returned as a
// sorted node set.
std::vector<int> BfsPath(const ParsedSentence &s, int a, int b);

// Synthetic corpus with `per_relation` pairs for each of the 14 relations;
// the relation is signalled by a marker word attached to the second event.
struct SyntheticCorpus {
  std::string pairs_json;
  std::string conllu;
  std::vector<std::string> vocabulary;  // every word form used
};
SyntheticCorpus MakeSyntheticCorpus(int per_relation);

// Random embeddings (normal, scale 0.5) for `words`, as a table and as text.
std::shared_ptr<EmbeddingTable> RandomEmbeddings(const std::vector<std::string> &words,
                                                 int dim, uint64_t seed);
std::string EmbeddingsText(const std::vector<std::string> &words, int dim,
                           uint64_t seed);

// Test-split distribution (class-id order) from the TimeBank 1.2 table:
// after 120, before 97, simultaneous 83, identity 43, includes 41,
// is_included 27, ended_by 19, during_inv 8, begun_by 7, begins 7,
// ibefore 5, iafter 4, during 3, ends 3.
std::array<long, kNumRelations> TimeBankTestCounts();
std::array<long, kNumRelations> TimeBankTrainCounts();
std::array<long, kNumRelations> TimeBankValidateCounts();

// Confusion matrix whose rows follow TimeBankTestCounts and whose per-class
// precision/recall match the best system's per-class table at two decimals.
ConfusionMatrix PerClassTableFixture();

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;
  const std::filesystem::path &path() const { return path_; }
  std::filesystem::path Write(const std::string &name, const std::string &content) const;

 private:
  std::filesystem::path path_;
};

std::string ReadText(const std::filesystem::path &path);

}  // namespace tlink::testing

#endif  // TLINK_TESTS_SUPPORT_FIXTURES_H_
