#ifndef TLINK_ENCODER_H_
#define TLINK_ENCODER_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

namespace tlink {

// Closed label vocabulary. Id 0 is reserved for unknown labels; known labels
// get contiguous ids in first-occurrence order.
class Vocabulary {
 public:
  static constexpr int kUnk = 0;
  static constexpr std::string_view kUnkLabel = "<unk>";

  Vocabulary() : labels_{std::string(kUnkLabel)} {}

  // Labels seen fewer than `min_count` times map to UNK.
  static Vocabulary Build(const std::vector<std::vector<std::string>> &sequences,
                          int min_count = 1);

  int size() const { return static_cast<int>(labels_.size()); }
  int Id(std::string_view label) const;
  const std::string &Label(int id) const { return labels_.at(id); }
  const std::vector<std::string> &labels() const { return labels_; }

  nlohmann::json ToJson() const;
  static Vocabulary FromJson(const nlohmann::json &j);

  friend bool operator==(const Vocabulary &a, const Vocabulary &b) {
    return a.labels_ == b.labels_;
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, int> ids_;
};

Eigen::VectorXd EncodeOneHot(const Vocabulary &vocab, std::string_view label);

// Pretrained word vectors. Lookup lowercases the word; every miss returns the
// same UNK vector, drawn once from uniform(-0.05, 0.05) with the table seed.
class EmbeddingTable {
 public:
  EmbeddingTable(int dim, uint64_t seed);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(vectors_.size()); }

  // Returns false (and keeps the existing entry) for duplicates.
  bool Add(std::string word, Eigen::VectorXd vector);

  bool Contains(std::string_view word) const;
  const Eigen::VectorXd &Embed(std::string_view word) const;
  const Eigen::VectorXd &unk() const { return unk_; }

 private:
  int dim_;
  Eigen::VectorXd unk_;
  std::unordered_map<std::string, Eigen::VectorXd> vectors_;
};

// Text format: one "word v1 ... v_dim" entry per line, whitespace separated.
// A single leading "count dim" header line (word2vec text style) is skipped.
EmbeddingTable LoadEmbeddings(const std::filesystem::path &path, int dim,
                              uint64_t seed);
EmbeddingTable ParseEmbeddings(std::istream &in, int dim, uint64_t seed);

std::string Lowercase(std::string_view s);

}  // namespace tlink

#endif  // TLINK_ENCODER_H_
