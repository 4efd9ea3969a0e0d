#include "tlink/encoder.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "tlink/error.h"
#include "tlink/rng.h"

namespace tlink {

std::string Lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

Vocabulary Vocabulary::Build(
    const std::vector<std::vector<std::string>> &sequences, int min_count) {
  std::unordered_map<std::string, int> counts;
  std::vector<std::string> order;
  for (const auto &seq : sequences) {
    for (const std::string &label : seq) {
      if (counts[label]++ == 0) order.push_back(label);
    }
  }
  Vocabulary vocab;
  for (const std::string &label : order) {
    if (counts[label] < min_count || label == kUnkLabel) continue;
    vocab.ids_.emplace(label, vocab.size());
    vocab.labels_.push_back(label);
  }
  return vocab;
}

int Vocabulary::Id(std::string_view label) const {
  auto it = ids_.find(std::string(label));
  return it == ids_.end() ? kUnk : it->second;
}

nlohmann::json Vocabulary::ToJson() const { return labels_; }

Vocabulary Vocabulary::FromJson(const nlohmann::json &j) {
  if (!j.is_array() || j.empty() || j[0] != kUnkLabel) {
    throw IncompatibleError("vocabulary must be an array starting with " +
                            std::string(kUnkLabel));
  }
  Vocabulary vocab;
  for (size_t i = 1; i < j.size(); ++i) {
    const std::string label = j[i].get<std::string>();
    if (!vocab.ids_.emplace(label, vocab.size()).second) {
      throw IncompatibleError("duplicate vocabulary label '" + label + "'");
    }
    vocab.labels_.push_back(label);
  }
  return vocab;
}

Eigen::VectorXd EncodeOneHot(const Vocabulary &vocab, std::string_view label) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(vocab.size());
  v[vocab.Id(label)] = 1.0;
  return v;
}

EmbeddingTable::EmbeddingTable(int dim, uint64_t seed) : dim_(dim) {
  if (dim <= 0) throw ConfigError("embedding dimension must be positive");
  Rng rng(seed);
  unk_.resize(dim);
  for (int i = 0; i < dim; ++i) unk_[i] = rng.Uniform(-0.05, 0.05);
}

bool EmbeddingTable::Add(std::string word, Eigen::VectorXd vector) {
  if (vector.size() != dim_) {
    throw ShapeError("embedding for '" + word + "' has " +
                     std::to_string(vector.size()) + " components, expected " +
                     std::to_string(dim_));
  }
  return vectors_.emplace(Lowercase(word), std::move(vector)).second;
}

bool EmbeddingTable::Contains(std::string_view word) const {
  return vectors_.contains(Lowercase(word));
}

const Eigen::VectorXd &EmbeddingTable::Embed(std::string_view word) const {
  auto it = vectors_.find(Lowercase(word));
  return it == vectors_.end() ? unk_ : it->second;
}

EmbeddingTable ParseEmbeddings(std::istream &in, int dim, uint64_t seed) {
  EmbeddingTable table(dim, seed);
  std::string line;
  int line_no = 0;
  std::vector<std::string_view> fields;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    fields.clear();
    std::string_view rest(line);
    while (true) {
      const size_t b = rest.find_first_not_of(" \t");
      if (b == std::string_view::npos) break;
      const size_t e = rest.find_first_of(" \t", b);
      fields.push_back(rest.substr(b, e == std::string_view::npos ? e : e - b));
      if (e == std::string_view::npos) break;
      rest = rest.substr(e);
    }
    if (fields.empty()) continue;
    if (line_no == 1 && fields.size() == 2 && dim != 1 &&
        std::all_of(line.begin(), line.end(), [](char c) {
          return std::isdigit(static_cast<unsigned char>(c)) || c == ' ';
        })) {
      continue;
    }
    if (static_cast<int>(fields.size()) != dim + 1) {
      throw ParseError("expected word followed by " + std::to_string(dim) +
                           " values, found " +
                           std::to_string(fields.size() - 1),
                       line_no);
    }
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) {
      const std::string_view f = fields[i + 1];
      double x = 0.0;
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), x);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        throw ParseError("bad number '" + std::string(f) + "'", line_no);
      }
      v[i] = x;
    }
    table.Add(std::string(fields[0]), std::move(v));
  }
  return table;
}

EmbeddingTable LoadEmbeddings(const std::filesystem::path &path, int dim,
                              uint64_t seed) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open embeddings " + path.string());
  return ParseEmbeddings(in, dim, seed);
}

}  // namespace tlink
