#include "support/fixtures.h"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <fstream>
#include <numeric>
#include <sstream>

#include <unistd.h>

#include "json.hpp"

namespace tlink::testing {

const char kReferenceConllu[] =
    "# sent_id = ref\n"
    "1\tKuwait\tKuwait\tPROPN\tNNP\t_\t3\tnsubj:pass\t_\t_\n"
    "2\twas\tbe\tAUX\tVBD\t_\t3\taux:pass\t_\t_\n"
    "3\tinvaded\tinvade\tVERB\tVBN\t_\t0\troot\t_\t_\n"
    "4\tbefore\tbefore\tSCONJ\tIN\t_\t6\tmark\t_\t_\n"
    "5\ttroops\ttroop\tNOUN\tNNS\t_\t6\tnsubj\t_\t_\n"
    "6\tarrived\tarrive\tVERB\tVBD\t_\t3\tadvcl\t_\t_\n"
    "7\t.\t.\tPUNCT\t.\t_\t3\tpunct\t_\t_\n"
    "\n";

ParsedSentence ReferenceSentence() { return ParseConllu(kReferenceConllu).at(0); }

std::string ConlluLine(int id, const std::string &form, const std::string &xpos,
                       int head, const std::string &deprel) {
  std::string lemma = Lowercase(form);
  return std::to_string(id) + "\t" + form + "\t" + lemma + "\t_\t" + xpos + "\t_\t" +
         std::to_string(head) + "\t" + deprel + "\t_\t_\n";
}

ParsedSentence MakeSentence(const std::string &id, const std::vector<Row> &rows) {
  std::vector<Token> tokens;
  for (size_t i = 0; i < rows.size(); ++i) {
    tokens.push_back({static_cast<int>(i) + 1, rows[i].form, Lowercase(rows[i].form),
                      rows[i].pos, rows[i].head, rows[i].deprel});
  }
  return ParsedSentence(id, std::move(tokens));
}

ParsedSentence RandomTree(Rng &rng, int n, const std::string &id) {
  // Build over a random permutation so token order is unrelated to depth.
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 1);
  rng.Shuffle(std::span<int>(perm));
  std::vector<int> head(n + 1, 0);
  for (int k = 1; k < n; ++k) head[perm[k]] = perm[rng.Below(k)];
  std::vector<Token> tokens;
  for (int i = 1; i <= n; ++i) {
    tokens.push_back({i, "w" + std::to_string(i), "w" + std::to_string(i), "NN",
                      head[i], head[i] == 0 ? "root" : "dep"});
  }
  return ParsedSentence(id, std::move(tokens));
}

std::vector<int> BfsPath(const ParsedSentence &s, int a, int b) {
  const int n = s.size();
  std::vector<std::vector<int>> adj(n + 1);
  for (const Token &t : s.tokens()) {
    if (t.head != 0) {
      adj[t.index].push_back(t.head);
      adj[t.head].push_back(t.index);
    }
  }
  std::vector<int> parent(n + 1, -1);
  std::deque<int> queue = {a};
  parent[a] = a;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v : adj[u]) {
      if (parent[v] == -1) {
        parent[v] = u;
        queue.push_back(v);
      }
    }
  }
  std::vector<int> path;
  for (int v = b; v != a; v = parent[v]) path.push_back(v);
  path.push_back(a);
  std::sort(path.begin(), path.end());
  return path;
}

SyntheticCorpus MakeSyntheticCorpus(int per_relation) {
  static const char *kSubjects[] = {"officials", "rebels", "markets", "leaders",
                                    "analysts", "farmers", "troops", "voters"};
  static const char *kVerbs[] = {"said", "rose", "fell", "met", "signed",
                                 "left", "won", "hit"};
  SyntheticCorpus out;
  std::set<std::string> words;
  nlohmann::json pairs = nlohmann::json::array();
  int sid = 0;
  for (int r = 0; r < kNumRelations; ++r) {
    const std::string relation(RelationName(RelationFromId(r)));
    const std::string marker = "mk_" + relation;
    for (int i = 0; i < per_relation; ++i, ++sid) {
      const std::string id = "syn" + std::to_string(sid);
      const std::string subj = kSubjects[(r + i) % 8];
      const std::string ev1 = kVerbs[(r + 2 * i) % 8];
      const std::string obj = kSubjects[(r + 3 * i + 1) % 8];
      const std::string ev2 = kVerbs[(r + i + 5) % 8];
      out.conllu += "# sent_id = " + id + "\n";
      out.conllu += ConlluLine(1, subj, "NNS", 2, "nsubj");
      out.conllu += ConlluLine(2, ev1, "VBD", 0, "root");
      out.conllu += ConlluLine(3, marker, "IN", 5, "mark");
      out.conllu += ConlluLine(4, obj, "NNS", 5, "nsubj");
      out.conllu += ConlluLine(5, ev2, "VBD", 2, "advcl");
      out.conllu += ConlluLine(6, ".", ".", 2, "punct");
      out.conllu += "\n";
      for (const std::string &w : {subj, ev1, marker, obj, ev2, std::string(".")}) {
        words.insert(w);
      }
      pairs.push_back({{"sentence", id}, {"e1", 2}, {"e2", 5}, {"relation", relation}});
    }
  }
  out.pairs_json = nlohmann::json{{"pairs", pairs}}.dump(1);
  out.vocabulary.assign(words.begin(), words.end());
  return out;
}

std::shared_ptr<EmbeddingTable> RandomEmbeddings(const std::vector<std::string> &words,
                                                 int dim, uint64_t seed) {
  std::istringstream in(EmbeddingsText(words, dim, seed));
  return std::make_shared<EmbeddingTable>(ParseEmbeddings(in, dim, seed));
}

std::string EmbeddingsText(const std::vector<std::string> &words, int dim,
                           uint64_t seed) {
  Rng rng(seed * 7919 + 17);
  std::string out;
  char buf[32];
  for (const std::string &w : words) {
    out += w;
    for (int i = 0; i < dim; ++i) {
      std::snprintf(buf, sizeof buf, " %.6f", 0.5 * rng.Normal());
      out += buf;
    }
    out += '\n';
  }
  return out;
}

// Class-id order: simultaneous, before, after, ibefore, iafter, begins,
// begun_by, ends, ended_by, includes, is_included, during, during_inv,
// identity.
std::array<long, kNumRelations> TimeBankTrainCounts() {
  return {288, 337, 419, 16, 12, 22, 25, 9, 66, 141, 93, 11, 26, 147};
}
std::array<long, kNumRelations> TimeBankValidateCounts() {
  return {41, 48, 60, 2, 2, 3, 3, 2, 9, 20, 13, 1, 4, 21};
}
std::array<long, kNumRelations> TimeBankTestCounts() {
  return {83, 97, 120, 5, 4, 7, 7, 3, 19, 41, 27, 3, 8, 43};
}

ConfusionMatrix PerClassTableFixture() {
  // Diagonal from the reported recalls times the test supports; column sums
  // from the reported precisions; off-diagonal mass placed by max-flow.
  return {{
      {42, 39, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 2},
      {0, 50, 11, 0, 0, 0, 0, 0, 0, 0, 8, 1, 2, 25},
      {0, 0, 82, 3, 2, 0, 1, 1, 13, 11, 7, 0, 0, 0},
      {0, 0, 3, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
      {0, 0, 3, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0},
      {0, 0, 5, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0},
      {0, 0, 4, 0, 0, 0, 3, 0, 0, 0, 0, 0, 0, 0},
      {0, 0, 3, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
      {0, 0, 7, 0, 0, 0, 0, 0, 12, 0, 0, 0, 0, 0},
      {11, 0, 14, 0, 0, 0, 0, 0, 0, 16, 0, 0, 0, 0},
      {12, 0, 0, 0, 0, 0, 0, 0, 0, 0, 15, 0, 0, 0},
      {3, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
      {8, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
      {19, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 24},
  }};
}

TempDir::TempDir() {
  static int counter = 0;
  path_ = std::filesystem::temp_directory_path() /
          ("tlink_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::filesystem::path TempDir::Write(const std::string &name,
                                     const std::string &content) const {
  const auto p = path_ / name;
  std::ofstream(p, std::ios::binary) << content;
  return p;
}

std::string ReadText(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace tlink::testing
