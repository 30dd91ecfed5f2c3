#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "cctree/ast.hpp"
#include "cctree/tokens.hpp"

namespace cctree {

struct EmbedConfig {
  std::uint32_t dim = 100;
  std::uint32_t epochs = 20;
  std::uint32_t negative_samples = 5;
  float learning_rate = 0.025f;  // decays linearly to 10% of the initial value
  std::uint32_t infer_epochs = 50;
  std::uint64_t seed = 1;
};

class DegenerateVocabulary : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CorruptFile : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class VersionMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Distributed bag-of-words paragraph vectors: during training each document
// vector learns to predict the document's tokens against negative samples
// drawn from the unigram^(3/4) noise distribution. Document vectors are
// discarded after training; inference re-derives a vector against the frozen
// word (output) matrix. Single-threaded and bit-deterministic for a fixed
// seed.
class EmbeddingModel {
 public:
  // Corpus must already be normalized and OOV-applied. Throws EmptyCorpus
  // when there are no sequences, DegenerateVocabulary when the corpus holds
  // fewer than two distinct terms.
  static EmbeddingModel train(const std::vector<TokenSequence>& corpus,
                              const EmbedConfig& config);

  // Gradient-step inference of a fresh document vector, word vectors frozen.
  // Unknown terms are skipped; an empty or all-unknown sequence yields the
  // exact zero vector. Repeated calls return identical vectors.
  std::vector<double> infer(const TokenSequence& seq) const;

  void save(const std::string& path) const;
  static EmbeddingModel load(const std::string& path);

  const EmbedConfig& config() const { return config_; }
  std::uint32_t dim() const { return config_.dim; }
  std::size_t vocab_size() const { return terms_.size(); }
  const std::vector<std::string>& terms() const { return terms_; }
  bool has_term(const std::string& term) const { return term_index_.count(term) != 0; }
  std::uint64_t vocab_fingerprint() const { return fingerprint_; }

 private:
  EmbeddingModel() = default;
  void index_terms();
  void rebuild_noise();
  std::uint64_t compute_fingerprint() const;

  EmbedConfig config_;
  std::vector<std::string> terms_;  // sorted lexicographically
  std::vector<std::uint64_t> counts_;
  std::vector<float> weights_;  // vocab_size x dim, row-major
  std::unordered_map<std::string, std::uint32_t> term_index_;
  std::vector<double> noise_cdf_;
  std::uint64_t fingerprint_ = 0;
};

}  // namespace cctree
