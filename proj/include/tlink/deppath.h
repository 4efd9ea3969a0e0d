#ifndef TLINK_DEPPATH_H_
#define TLINK_DEPPATH_H_

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tlink/corpus.h"

namespace tlink {

// Word, POS and dependency-label sequences for one event pair. words/pos run
// over every selected token; deps only over the core dependency path. All
// sequences are in surface order.
struct ContextSequences {
  std::vector<std::string> words;
  std::vector<std::string> pos;
  std::vector<std::string> deps;
  std::vector<int> path_indices;
  std::vector<int> enriched_indices;
};

// Tokens on the tree path between `a` and `b` (both endpoints and their
// lowest common ancestor included), in ascending index order.
std::vector<int> DependencyPath(const ParsedSentence &s, int a, int b);

// True if a child attached with `deprel` is kept by the children rule:
// nmod:tmod matches exactly; every other whitelisted label matches on the
// part before the first ':' (aux:pass, conj:and, ...).
bool IsContextModifier(std::string_view deprel);

// Path plus every direct child of a path token whose label passes
// IsContextModifier.
std::set<int> ApplyChildrenRule(const ParsedSentence &s,
                                const std::vector<int> &path);

// Adds commas immediately before or after e1, e2, or a selected non-comma
// child of e1/e2.
std::set<int> ApplyCommaRule(const ParsedSentence &s, std::set<int> selected,
                             int e1, int e2);

std::vector<ContextSequences> BuildAllSequences(const Corpus &corpus,
                                                bool use_rules);

ContextSequences BuildSequences(const ParsedSentence &s, const EventPair &pair,
                                bool use_rules);

// Contiguous token span e1..e2 inclusive; deps stays empty.
ContextSequences ExtractSurfacePath(const ParsedSentence &s,
                                    const EventPair &pair);

// Incoming label of a token, "root" for the sentence root.
std::string_view DeprelOf(const ParsedSentence &s, int index);

}  // namespace tlink

#endif  // TLINK_DEPPATH_H_
