#include "tlink/baseline_features.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "tlink/deppath.h"
#include "tlink/error.h"

namespace tlink {

namespace {

std::string Trim(const std::string &s) {
  const size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool IsPrepositionTag(const std::string &pos) { return pos == "IN" || pos == "TO"; }

void SetOneHot(Vector &v, int offset, const Vocabulary &vocab,
               const std::string &label) {
  v[offset + vocab.Id(label)] = 1.0;
}

}  // namespace

bool Lexicons::VerbsRelated(const std::string &a, const std::string &b,
                            const std::string &relation) const {
  for (const auto &key : {std::make_pair(a, b), std::make_pair(b, a)}) {
    auto it = verb_relations.find(key);
    if (it != verb_relations.end() && it->second.contains(relation)) return true;
  }
  return false;
}

nlohmann::json Lexicons::ToJson() const {
  nlohmann::json relations = nlohmann::json::array();
  for (const auto &[verbs, rels] : verb_relations) {
    for (const std::string &rel : rels) {
      relations.push_back({verbs.first, rel, verbs.second});
    }
  }
  return {{"signal_words", signal_words}, {"verb_relations", relations}};
}

Lexicons Lexicons::FromJson(const nlohmann::json &j) {
  Lexicons lex;
  try {
    for (const auto &w : j.at("signal_words")) lex.signal_words.insert(w.get<std::string>());
    for (const auto &triple : j.at("verb_relations")) {
      lex.verb_relations[{triple.at(0).get<std::string>(),
                          triple.at(2).get<std::string>()}]
          .insert(triple.at(1).get<std::string>());
    }
  } catch (const nlohmann::json::exception &e) {
    throw IncompatibleError(std::string("lexicons: ") + e.what());
  }
  return lex;
}

std::set<std::string> LoadSignalWords(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open signal word list " + path.string());
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    line = Trim(line);
    if (line.empty() || line[0] == '#') continue;
    // Collapse internal whitespace so phrases match token sequences.
    std::istringstream parts(Lowercase(line));
    std::string word, phrase;
    while (parts >> word) phrase += (phrase.empty() ? "" : " ") + word;
    words.insert(phrase);
  }
  return words;
}

std::map<std::pair<std::string, std::string>, std::set<std::string>>
LoadVerbRelations(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open verb relations " + path.string());
  std::map<std::pair<std::string, std::string>, std::set<std::string>> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty() || Trim(line)[0] == '#') continue;
    std::vector<std::string> fields;
    std::istringstream cols(line);
    std::string field;
    while (std::getline(cols, field, '\t')) fields.push_back(Trim(field));
    if (fields.size() != 3) {
      throw ParseError("expected verb1<TAB>relation<TAB>verb2", line_no);
    }
    const std::string relation = Lowercase(fields[1]);
    if (relation != "happens-before" && relation != "similar") {
      throw ParseError("unsupported verb relation '" + fields[1] + "'", line_no);
    }
    out[{Lowercase(fields[0]), Lowercase(fields[2])}].insert(relation);
  }
  return out;
}

nlohmann::json Baseline1Vocabs::ToJson() const {
  return {{"pos", pos.ToJson()},
          {"deprel", deprel.ToJson()},
          {"token", token.ToJson()},
          {"lemma", lemma.ToJson()},
          {"preposition", preposition.ToJson()}};
}

Baseline1Vocabs Baseline1Vocabs::FromJson(const nlohmann::json &j) {
  try {
    return {Vocabulary::FromJson(j.at("pos")), Vocabulary::FromJson(j.at("deprel")),
            Vocabulary::FromJson(j.at("token")), Vocabulary::FromJson(j.at("lemma")),
            Vocabulary::FromJson(j.at("preposition"))};
  } catch (const nlohmann::json::exception &e) {
    throw IncompatibleError(std::string("baseline vocabularies: ") + e.what());
  }
}

std::vector<std::string> PrepositionsOf(const ParsedSentence &s, int index) {
  std::vector<std::string> preps;
  for (int child : s.children(index)) {
    const Token &t = s.token(child);
    const std::string_view base =
        std::string_view(t.deprel).substr(0, t.deprel.find(':'));
    if (IsPrepositionTag(t.pos) || base == "case" || base == "mark") {
      preps.push_back(Lowercase(t.form));
    }
  }
  const int head = s.token(index).head;
  if (head != 0 && IsPrepositionTag(s.token(head).pos)) {
    preps.push_back(Lowercase(s.token(head).form));
  }
  return preps;
}

Baseline1Featurizer::Baseline1Featurizer(Baseline1Vocabs vocabs, Lexicons lexicons)
    : vocabs_(std::move(vocabs)),
      lexicons_(std::move(lexicons)),
      signal_list_(lexicons_.signal_words.begin(), lexicons_.signal_words.end()) {}

Baseline1Vocabs Baseline1Featurizer::BuildVocabs(const Corpus &train,
                                                 int min_count) {
  std::vector<EventPair> pairs = train.pairs;
  std::stable_sort(pairs.begin(), pairs.end(), CanonicalLess);
  std::vector<std::vector<std::string>> pos, deprel, token, lemma, preps;
  for (const EventPair &pair : pairs) {
    const ParsedSentence &s = train.SentenceOf(pair);
    for (int e : {pair.e1, pair.e2}) {
      const Token &t = s.token(e);
      pos.push_back({t.pos});
      deprel.push_back({std::string(DeprelOf(s, e))});
      std::vector<std::string> child_labels;
      for (int c : s.children(e)) child_labels.push_back(s.token(c).deprel);
      deprel.push_back(std::move(child_labels));
      token.push_back({Lowercase(t.form)});
      lemma.push_back({Lowercase(t.lemma)});
      preps.push_back(PrepositionsOf(s, e));
    }
  }
  return {Vocabulary::Build(pos), Vocabulary::Build(deprel),
          Vocabulary::Build(token, min_count), Vocabulary::Build(lemma, min_count),
          Vocabulary::Build(preps)};
}

int Baseline1Featurizer::BinaryOffset() const {
  return 2 * vocabs_.pos.size() + 2 * vocabs_.deprel.size() +
         2 * vocabs_.token.size() + 2 * vocabs_.lemma.size() +
         2 * vocabs_.deprel.size();
}

int Baseline1Featurizer::Width() const {
  return BinaryOffset() + kNumBinary + vocabs_.deprel.size() +
         2 * vocabs_.preposition.size() + static_cast<int>(signal_list_.size()) + 1;
}

Vector Baseline1Featurizer::Featurize(const ParsedSentence &s,
                                      const EventPair &pair) const {
  const int e1 = pair.e1;
  const int e2 = pair.e2;
  if (!s.Contains(e1) || !s.Contains(e2)) {
    throw ReferenceError("pair outside sentence '" + s.id() + "'");
  }
  const Token &t1 = s.token(e1);
  const Token &t2 = s.token(e2);
  const int np = vocabs_.pos.size();
  const int nd = vocabs_.deprel.size();
  const int nt = vocabs_.token.size();
  const int nl = vocabs_.lemma.size();
  const int nr = vocabs_.preposition.size();

  Vector v = Vector::Zero(Width());
  int off = 0;
  SetOneHot(v, off, vocabs_.pos, t1.pos);
  SetOneHot(v, off + np, vocabs_.pos, t2.pos);
  off += 2 * np;
  SetOneHot(v, off, vocabs_.deprel, std::string(DeprelOf(s, e1)));
  SetOneHot(v, off + nd, vocabs_.deprel, std::string(DeprelOf(s, e2)));
  off += 2 * nd;
  SetOneHot(v, off, vocabs_.token, Lowercase(t1.form));
  SetOneHot(v, off + nt, vocabs_.token, Lowercase(t2.form));
  off += 2 * nt;
  SetOneHot(v, off, vocabs_.lemma, Lowercase(t1.lemma));
  SetOneHot(v, off + nl, vocabs_.lemma, Lowercase(t2.lemma));
  off += 2 * nl;
  for (int k = 0; k < 2; ++k) {
    for (int c : s.children(k == 0 ? e1 : e2)) {
      SetOneHot(v, off + k * nd, vocabs_.deprel, s.token(c).deprel);
    }
  }
  off += 2 * nd;

  const std::string l1 = Lowercase(t1.lemma);
  const std::string l2 = Lowercase(t2.lemma);
  v[off + kHappensBefore] = lexicons_.VerbsRelated(l1, l2, "happens-before");
  v[off + kSimilar] = lexicons_.VerbsRelated(l1, l2, "similar");
  v[off + kSamePos] = t1.pos == t2.pos;
  v[off + kE1Root] = t1.head == 0;
  v[off + kE2Root] = t2.head == 0;
  v[off + kE1GovernsE2] = t2.head == e1;
  v[off + kE2GovernsE1] = t1.head == e2;
  off += kNumBinary;

  if (t2.head == e1) {
    SetOneHot(v, off, vocabs_.deprel, t2.deprel);
  } else if (t1.head == e2) {
    SetOneHot(v, off, vocabs_.deprel, t1.deprel);
  }
  off += nd;

  for (int k = 0; k < 2; ++k) {
    for (const std::string &p : PrepositionsOf(s, k == 0 ? e1 : e2)) {
      SetOneHot(v, off + k * nr, vocabs_.preposition, p);
    }
  }
  off += 2 * nr;

  // Signal words strictly between the events.
  std::vector<std::string> between;
  for (int i = e1 + 1; i < e2; ++i) between.push_back(Lowercase(s.token(i).form));
  for (size_t k = 0; k < signal_list_.size(); ++k) {
    std::vector<std::string> phrase;
    std::istringstream parts(signal_list_[k]);
    for (std::string w; parts >> w;) phrase.push_back(w);
    if (!phrase.empty() &&
        std::search(between.begin(), between.end(), phrase.begin(), phrase.end()) !=
            between.end()) {
      v[off + static_cast<int>(k)] = 1.0;
    }
  }
  off += static_cast<int>(signal_list_.size());

  v[off] = (e2 - e1) / 10.0;
  return v;
}

EventWindows ExtractEventWindows(const ParsedSentence &s, const EventPair &pair,
                                 int width) {
  if (!s.Contains(pair.e1) || !s.Contains(pair.e2)) {
    throw ReferenceError("pair outside sentence '" + s.id() + "'");
  }
  auto left = [&](int e) {
    std::vector<int> w;
    for (int i = std::max(1, e - width); i < e; ++i) w.push_back(i);
    return w;
  };
  auto right = [&](int e) {
    std::vector<int> w;
    for (int i = e + 1; i <= std::min(s.size(), e + width); ++i) w.push_back(i);
    return w;
  };
  return {left(pair.e1), right(pair.e1), left(pair.e2), right(pair.e2)};
}

}  // namespace tlink
