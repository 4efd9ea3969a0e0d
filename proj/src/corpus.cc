#include "tlink/corpus.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "tlink/error.h"
#include "tlink/rng.h"

namespace tlink {

namespace {

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t start = 0;
  while (true) {
    const size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

int ParseInt(std::string_view field, std::string_view what, int line) {
  int value = 0;
  size_t used = 0;
  try {
    value = std::stoi(std::string(field), &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used == 0 || used != field.size()) {
    throw ParseError("bad " + std::string(what) + " '" + std::string(field) + "'",
                     line);
  }
  return value;
}

std::string ReadFile(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

ParsedSentence::ParsedSentence(std::string id, std::vector<Token> tokens)
    : id_(std::move(id)), tokens_(std::move(tokens)) {
  const int n = size();
  if (n == 0) throw StructureError("sentence " + id_ + ": no tokens");
  children_.assign(n + 1, {});
  int roots = 0;
  for (int i = 1; i <= n; ++i) {
    const Token &t = tokens_[i - 1];
    if (t.index != i) {
      throw StructureError("sentence " + id_ + ": token ids are not 1.." +
                           std::to_string(n));
    }
    if (t.head == i) {
      throw StructureError("sentence " + id_ + ": token " + std::to_string(i) +
                           " is its own head");
    }
    if (t.head < 0 || t.head > n) {
      throw StructureError("sentence " + id_ + ": token " + std::to_string(i) +
                           " has head " + std::to_string(t.head) +
                           " outside the sentence");
    }
    if (t.deprel.empty()) {
      throw StructureError("sentence " + id_ + ": token " + std::to_string(i) +
                           " has no dependency label");
    }
    if (t.head == 0) {
      ++roots;
      root_ = i;
    }
    children_[t.head].push_back(i);
  }
  if (roots != 1) {
    throw StructureError("sentence " + id_ + ": expected one root, found " +
                         std::to_string(roots));
  }
  // Every token must reach the root within n steps.
  for (int i = 1; i <= n; ++i) {
    int node = i;
    int steps = 0;
    while (node != 0 && steps <= n) {
      node = tokens_[node - 1].head;
      ++steps;
    }
    if (node != 0) {
      throw StructureError("sentence " + id_ + ": head links form a cycle");
    }
  }
}

const ParsedSentence &Corpus::SentenceOf(const EventPair &pair) const {
  auto it = sentences.find(pair.sentence);
  if (it == sentences.end()) {
    throw ReferenceError("unknown sentence '" + pair.sentence + "'");
  }
  return it->second;
}

std::vector<ParsedSentence> ParseConllu(std::string_view text) {
  std::vector<ParsedSentence> sentences;
  std::vector<Token> tokens;
  std::string sent_id;
  int line_no = 0;
  int block_start = 0;

  auto flush = [&]() {
    if (tokens.empty()) {
      sent_id.clear();
      return;
    }
    if (sent_id.empty()) sent_id = "s" + std::to_string(sentences.size() + 1);
    try {
      sentences.emplace_back(sent_id, std::move(tokens));
    } catch (const StructureError &e) {
      throw StructureError(std::string(e.what()) + " (block starting at line " +
                           std::to_string(block_start) + ")");
    }
    tokens.clear();
    sent_id.clear();
  };

  size_t pos = 0;
  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (line.find_first_not_of(" \t") == std::string_view::npos) {
      flush();
      if (end == text.size()) break;
      continue;
    }
    if (line.front() == '#') {
      constexpr std::string_view kSentId = "sent_id";
      std::string_view rest = line.substr(1);
      rest.remove_prefix(std::min(rest.find_first_not_of(' '), rest.size()));
      if (rest.starts_with(kSentId)) {
        rest.remove_prefix(kSentId.size());
        rest.remove_prefix(std::min(rest.find_first_not_of(' '), rest.size()));
        if (rest.starts_with('=')) {
          rest.remove_prefix(1);
          const size_t b = rest.find_first_not_of(' ');
          const size_t e = rest.find_last_not_of(' ');
          sent_id = b == std::string_view::npos
                        ? std::string()
                        : std::string(rest.substr(b, e - b + 1));
        }
      }
      continue;
    }

    const auto fields = SplitTabs(line);
    if (fields.size() != 10) {
      throw ParseError("expected 10 tab-separated columns, found " +
                           std::to_string(fields.size()),
                       line_no);
    }
    if (fields[0].find_first_of("-.") != std::string_view::npos) continue;
    if (tokens.empty()) block_start = line_no;

    Token token;
    token.index = ParseInt(fields[0], "token id", line_no);
    if (token.index != static_cast<int>(tokens.size()) + 1) {
      throw ParseError("token id " + std::to_string(token.index) +
                           " out of sequence",
                       line_no);
    }
    token.form = fields[1];
    token.lemma = fields[2];
    token.pos = fields[4] != "_" ? fields[4] : fields[3];
    token.head = ParseInt(fields[6], "head", line_no);
    token.deprel = fields[7] != "_" ? std::string(fields[7]) : std::string();
    tokens.push_back(std::move(token));
    if (end == text.size()) break;
  }
  flush();
  return sentences;
}

EventPair NormalizePair(std::string sentence, int e1, int e2, Relation r) {
  if (e1 == e2) {
    throw InvalidPairError("event pair in sentence '" + sentence +
                           "' uses token " + std::to_string(e1) + " twice");
  }
  if (e1 < e2) return {std::move(sentence), e1, e2, r};
  return {std::move(sentence), e2, e1, InvertRelation(r)};
}

Corpus BuildCorpus(std::string_view pairs_json, std::string_view conllu_text) {
  Corpus corpus;
  for (ParsedSentence &s : ParseConllu(conllu_text)) {
    const std::string id = s.id();
    if (!corpus.sentences.emplace(id, std::move(s)).second) {
      throw StructureError("duplicate sentence id '" + id + "'");
    }
  }

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(pairs_json);
  } catch (const nlohmann::json::parse_error &e) {
    throw ParseError(std::string("pairs file: ") + e.what(), 0);
  }
  if (!doc.is_object() || !doc.contains("pairs") || !doc["pairs"].is_array()) {
    throw SchemaError("pairs file must be an object with a \"pairs\" array");
  }
  for (const auto &entry : doc["pairs"]) {
    if (!entry.is_object() || !entry.contains("sentence") ||
        !entry.contains("e1") || !entry.contains("e2") ||
        !entry.contains("relation") || !entry["sentence"].is_string() ||
        !entry["e1"].is_number_integer() || !entry["e2"].is_number_integer() ||
        !entry["relation"].is_string()) {
      throw SchemaError("malformed pair entry: " + entry.dump());
    }
    const std::string sentence = entry["sentence"];
    const int e1 = entry["e1"];
    const int e2 = entry["e2"];
    const Relation r = ParseRelation(entry["relation"].get<std::string>());
    auto it = corpus.sentences.find(sentence);
    if (it == corpus.sentences.end()) {
      throw ReferenceError("pair refers to unknown sentence '" + sentence + "'");
    }
    if (!it->second.Contains(e1) || !it->second.Contains(e2)) {
      throw ReferenceError("pair (" + std::to_string(e1) + ", " +
                           std::to_string(e2) + ") outside sentence '" +
                           sentence + "'");
    }
    corpus.pairs.push_back(NormalizePair(sentence, e1, e2, r));
  }
  return corpus;
}

Corpus LoadCorpus(const std::filesystem::path &pairs_path,
                  const std::filesystem::path &conllu_path) {
  return BuildCorpus(ReadFile(pairs_path), ReadFile(conllu_path));
}

bool CanonicalLess(const EventPair &a, const EventPair &b) {
  return std::tie(a.sentence, a.e1, a.e2, a.relation) <
         std::tie(b.sentence, b.e1, b.e2, b.relation);
}

std::array<int, kNumRelations> RelationCounts(
    const std::vector<EventPair> &pairs) {
  std::array<int, kNumRelations> counts{};
  for (const EventPair &p : pairs) ++counts[RelationId(p.relation)];
  return counts;
}

CorpusSplit SplitCorpus(const Corpus &corpus, const SplitRatios &ratios,
                        uint64_t seed) {
  const std::array<double, 3> r = {ratios.train, ratios.validate, ratios.test};
  for (double x : r) {
    if (!(x >= 0.0)) throw ConfigError("split ratios must be nonnegative");
  }
  if (std::abs(r[0] + r[1] + r[2] - 1.0) > 1e-9) {
    throw ConfigError("split ratios must sum to 1");
  }

  CorpusSplit split;
  std::array<Corpus *, 3> parts = {&split.train, &split.validate, &split.test};
  for (Corpus *part : parts) part->sentences = corpus.sentences;

  std::array<std::vector<EventPair>, kNumRelations> strata;
  for (const EventPair &p : corpus.pairs) {
    strata[RelationId(p.relation)].push_back(p);
  }

  Rng rng(seed);
  for (auto &stratum : strata) {
    std::stable_sort(stratum.begin(), stratum.end(), CanonicalLess);
    rng.Shuffle(std::span<EventPair>(stratum));

    // Largest-remainder apportionment; ties go to the earlier part.
    const int n = static_cast<int>(stratum.size());
    std::array<int, 3> counts{};
    std::array<double, 3> remainders{};
    int assigned = 0;
    for (int k = 0; k < 3; ++k) {
      const double exact = n * r[k];
      counts[k] = static_cast<int>(std::floor(exact + 1e-9));
      remainders[k] = exact - counts[k];
      assigned += counts[k];
    }
    std::array<int, 3> order = {0, 1, 2};
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return remainders[a] > remainders[b];
    });
    for (int i = 0; assigned < n; ++i, ++assigned) ++counts[order[i % 3]];

    int offset = 0;
    for (int k = 0; k < 3; ++k) {
      for (int i = 0; i < counts[k]; ++i) {
        parts[k]->pairs.push_back(stratum[offset + i]);
      }
      offset += counts[k];
    }
  }
  return split;
}

}  // namespace tlink
