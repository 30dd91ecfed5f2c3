#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cctree/ast.hpp"

namespace cctree {

class EmptyCorpus : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class VocabIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OovPolicy {
  std::string oov_symbol = "<OOV>";
};

// Terms retained by the document-frequency threshold, with their DF counts.
struct Vocabulary {
  std::map<std::string, std::uint64_t> terms;
  std::uint64_t corpus_size = 0;
  double min_df_fraction = 0.0;

  bool contains(const std::string& term) const { return terms.count(term) != 0; }
};

// Replaces every whitespace code point inside string-literal token values
// with "_". Other items pass through untouched.
TokenSequence normalize_sequence(const TokenSequence& seq);

// Document-frequency threshold for a corpus of `corpus_size` sequences.
// The fraction is quantized to nine decimal places before the ceiling so
// that decimal inputs divide exactly (0.01 of 2,000,000 yields 20,000, never
// 20,001 from float noise). Result is at least 1.
std::uint64_t df_threshold(double fraction, std::uint64_t corpus_size);

// Retains terms present in at least ceil(fraction * corpus_size) sequences;
// presence is counted once per sequence. Throws EmptyCorpus on an empty
// corpus and std::invalid_argument when fraction is outside (0, 1].
Vocabulary build_vocabulary(const std::vector<TokenSequence>& corpus, double min_df_fraction);

// Items absent from the vocabulary become policy.oov_symbol.
TokenSequence apply_oov(const TokenSequence& seq, const Vocabulary& vocab,
                        const OovPolicy& policy = {});

// Two-column TSV (term TAB df, sorted) behind a one-line header carrying
// corpus_size and the fraction; round-trips bit-exactly.
void save_vocabulary(const Vocabulary& vocab, const std::string& path);
Vocabulary load_vocabulary(const std::string& path);

}  // namespace cctree
