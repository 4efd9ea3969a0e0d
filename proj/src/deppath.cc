#include "tlink/deppath.h"

#include <algorithm>
#include <array>

#include "tlink/error.h"

namespace tlink {

namespace {

constexpr std::array<std::string_view, 11> kModifierLabels = {
    "mark", "case", "aux",    "conj",  "expl", "cc",
    "cop",  "amod", "advmod", "punct", "ref",
};

void CheckIndex(const ParsedSentence &s, int index) {
  if (!s.Contains(index)) {
    throw ReferenceError("token " + std::to_string(index) +
                         " outside sentence '" + s.id() + "'");
  }
}

}  // namespace

std::vector<int> DependencyPath(const ParsedSentence &s, int a, int b) {
  CheckIndex(s, a);
  CheckIndex(s, b);
  if (a == b) {
    throw InvalidPairError("dependency path needs two distinct tokens");
  }
  std::vector<int> up_a;
  for (int node = a; node != 0; node = s.token(node).head) up_a.push_back(node);
  std::vector<int> up_b;
  for (int node = b; node != 0; node = s.token(node).head) up_b.push_back(node);

  // Strip the shared suffix (root side), keeping the lowest common ancestor.
  int lca = 0;
  while (!up_a.empty() && !up_b.empty() && up_a.back() == up_b.back()) {
    lca = up_a.back();
    up_a.pop_back();
    up_b.pop_back();
  }
  std::vector<int> path;
  path.reserve(up_a.size() + up_b.size() + 1);
  path.insert(path.end(), up_a.begin(), up_a.end());
  path.insert(path.end(), up_b.begin(), up_b.end());
  path.push_back(lca);
  std::sort(path.begin(), path.end());
  return path;
}

bool IsContextModifier(std::string_view deprel) {
  if (deprel == "nmod:tmod") return true;
  const std::string_view base = deprel.substr(0, deprel.find(':'));
  return std::find(kModifierLabels.begin(), kModifierLabels.end(), base) !=
         kModifierLabels.end();
}

std::set<int> ApplyChildrenRule(const ParsedSentence &s,
                                const std::vector<int> &path) {
  std::set<int> selected(path.begin(), path.end());
  for (int node : path) {
    for (int child : s.children(node)) {
      if (IsContextModifier(s.token(child).deprel)) selected.insert(child);
    }
  }
  return selected;
}

std::set<int> ApplyCommaRule(const ParsedSentence &s, std::set<int> selected,
                             int e1, int e2) {
  std::vector<int> anchors = {e1, e2};
  for (int index : selected) {
    const Token &t = s.token(index);
    if ((t.head == e1 || t.head == e2) && t.form != ",") anchors.push_back(index);
  }
  for (int anchor : anchors) {
    for (int neighbor : {anchor - 1, anchor + 1}) {
      if (s.Contains(neighbor) && s.token(neighbor).form == ",") {
        selected.insert(neighbor);
      }
    }
  }
  return selected;
}

std::string_view DeprelOf(const ParsedSentence &s, int index) {
  const Token &t = s.token(index);
  return t.head == 0 ? std::string_view("root") : std::string_view(t.deprel);
}

ContextSequences BuildSequences(const ParsedSentence &s, const EventPair &pair,
                                bool use_rules) {
  ContextSequences seq;
  seq.path_indices = DependencyPath(s, pair.e1, pair.e2);
  std::set<int> selected(seq.path_indices.begin(), seq.path_indices.end());
  if (use_rules) {
    selected = ApplyCommaRule(s, ApplyChildrenRule(s, seq.path_indices),
                              pair.e1, pair.e2);
  }
  for (int index : selected) {
    const Token &t = s.token(index);
    seq.words.push_back(t.form);
    seq.pos.push_back(t.pos);
    if (!std::binary_search(seq.path_indices.begin(), seq.path_indices.end(),
                            index)) {
      seq.enriched_indices.push_back(index);
    }
  }
  for (int index : seq.path_indices) {
    seq.deps.emplace_back(DeprelOf(s, index));
  }
  return seq;
}

std::vector<ContextSequences> BuildAllSequences(const Corpus &corpus,
                                                bool use_rules) {
  std::vector<ContextSequences> out;
  out.reserve(corpus.pairs.size());
  for (const EventPair &pair : corpus.pairs) {
    out.push_back(BuildSequences(corpus.SentenceOf(pair), pair, use_rules));
  }
  return out;
}

ContextSequences ExtractSurfacePath(const ParsedSentence &s,
                                    const EventPair &pair) {
  CheckIndex(s, pair.e1);
  CheckIndex(s, pair.e2);
  ContextSequences seq;
  for (int i = std::min(pair.e1, pair.e2); i <= std::max(pair.e1, pair.e2); ++i) {
    seq.words.push_back(s.token(i).form);
    seq.pos.push_back(s.token(i).pos);
    seq.path_indices.push_back(i);
  }
  return seq;
}

}  // namespace tlink
