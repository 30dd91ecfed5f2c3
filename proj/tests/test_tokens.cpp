#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"

#include "cctree/tokens.hpp"

using namespace cctree;

namespace {

std::string tmp_path(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path();
  return (dir / ("cctree_tokens_" + std::to_string(::getpid()) + "_" + name)).string();
}

struct FileGuard {
  std::string path;
  ~FileGuard() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("normalize_sequence underscores whitespace inside string literals only") {
  TokenSequence seq = {
      "identifier|has space",            // not a string literal: untouched
      "string_literal|a b\tc\nd",        // ASCII whitespace
      "string_literal|x\xC2\xA0y",       // U+00A0 no-break space
      "string_literal|p\xE2\x80\x83q",   // U+2003 em space
      "string_literal|plain",
      "block",
  };
  TokenSequence out = normalize_sequence(seq);
  REQUIRE(out.size() == seq.size());
  CHECK(out[0] == "identifier|has space");
  CHECK(out[1] == "string_literal|a_b_c_d");
  CHECK(out[2] == "string_literal|x_y");
  CHECK(out[3] == "string_literal|p_q");
  CHECK(out[4] == "string_literal|plain");
  CHECK(out[5] == "block");
}

TEST_CASE("normalize_sequence preserves escaped separators and odd bytes") {
  // token "a |b\" with a space: escaping must survive the rewrite
  TokenSequence seq = {"string_literal|a \\|b\\\\"};
  TokenSequence out = normalize_sequence(seq);
  CHECK(out[0] == "string_literal|a_\\|b\\\\");

  // a lone 0xFF byte is not valid UTF-8; it passes through as-is
  TokenSequence malformed = {std::string("string_literal|x\xFFy")};
  CHECK(normalize_sequence(malformed)[0] == std::string("string_literal|x\xFFy"));

  // a lone 0xA0 byte falls back to its latin-1 reading, which is whitespace
  TokenSequence latin1 = {std::string("string_literal|x\xA0y")};
  CHECK(normalize_sequence(latin1)[0] == "string_literal|x_y");
}

TEST_CASE("normalize_sequence is idempotent") {
  TokenSequence seq = {"string_literal|a b\tc", "identifier|x", "string_literal| "};
  TokenSequence once = normalize_sequence(seq);
  CHECK(normalize_sequence(once) == once);
}

TEST_CASE("df_threshold quantizes decimals before the ceiling") {
  CHECK(df_threshold(0.2, 10) == 2);
  CHECK(df_threshold(0.01, 2000000) == 20000);
  CHECK(df_threshold(0.1, 50) == 5);
  CHECK(df_threshold(1.0, 7) == 7);
  CHECK(df_threshold(0.5, 3) == 2);
  CHECK(df_threshold(0.001, 3) == 1);   // never below one
  CHECK(df_threshold(1e-9, 5) == 1);
  CHECK(df_threshold(0.3, 10) == 3);

  CHECK_THROWS_AS(df_threshold(0.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(df_threshold(-0.1, 10), std::invalid_argument);
  CHECK_THROWS_AS(df_threshold(1.5, 10), std::invalid_argument);
}

TEST_CASE("build_vocabulary counts presence once per sequence") {
  std::vector<TokenSequence> corpus = {
      {"a", "b", "a"},
      {"a", "c"},
      {"b", "c"},
      {"a"},
  };
  Vocabulary half = build_vocabulary(corpus, 0.5);  // threshold 2 of 4
  CHECK(half.corpus_size == 4);
  CHECK(half.min_df_fraction == 0.5);
  REQUIRE(half.terms.size() == 3);
  CHECK(half.terms.at("a") == 3);  // the repeat inside sequence one counts once
  CHECK(half.terms.at("b") == 2);
  CHECK(half.terms.at("c") == 2);

  Vocabulary strict = build_vocabulary(corpus, 0.6);  // threshold 3 of 4
  REQUIRE(strict.terms.size() == 1);
  CHECK(strict.contains("a"));
  CHECK(!strict.contains("b"));

  CHECK_THROWS_AS(build_vocabulary({}, 0.5), EmptyCorpus);
  CHECK_THROWS_AS(build_vocabulary(corpus, 0.0), std::invalid_argument);
}

TEST_CASE("apply_oov replaces terms outside the vocabulary") {
  Vocabulary vocab;
  vocab.terms = {{"a", 2}, {"b", 2}};
  vocab.corpus_size = 2;
  TokenSequence seq = {"a", "x", "b", "y"};
  CHECK(apply_oov(seq, vocab) == TokenSequence{"a", "<OOV>", "b", "<OOV>"});

  OovPolicy policy;
  policy.oov_symbol = "<unk>";
  CHECK(apply_oov(seq, vocab, policy) == TokenSequence{"a", "<unk>", "b", "<unk>"});
  CHECK(apply_oov({}, vocab).empty());
}

TEST_CASE("vocabulary files round-trip exactly") {
  Vocabulary vocab;
  vocab.corpus_size = 12345;
  vocab.min_df_fraction = 0.1;
  vocab.terms = {
      {"plain", 7},
      {"with\ttab", 3},
      {"with\nnewline", 4},
      {"back\\slash", 5},
      {"string_literal|hello_world", 9},
      {"\xE2\x98\x83 snowman", 2},
  };

  FileGuard file{tmp_path("roundtrip.tsv")};
  save_vocabulary(vocab, file.path);
  Vocabulary back = load_vocabulary(file.path);
  CHECK(back.corpus_size == vocab.corpus_size);
  CHECK(back.min_df_fraction == vocab.min_df_fraction);
  CHECK(back.terms == vocab.terms);
}

TEST_CASE("vocabulary loading rejects foreign files") {
  CHECK_THROWS_AS(load_vocabulary(tmp_path("missing.tsv")), VocabIoError);

  FileGuard bad{tmp_path("bad.tsv")};
  {
    std::FILE* f = std::fopen(bad.path.c_str(), "wb");
    REQUIRE(f != nullptr);
    std::fputs("#not-a-vocab\tv1\n", f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(load_vocabulary(bad.path), VocabIoError);

  FileGuard malformed{tmp_path("malformed.tsv")};
  {
    std::FILE* f = std::fopen(malformed.path.c_str(), "wb");
    REQUIRE(f != nullptr);
    std::fputs("#cctree-vocab\tv1\tcorpus_size=2\tmin_df_fraction=0.5\n", f);
    std::fputs("row-without-count\n", f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(load_vocabulary(malformed.path), VocabIoError);
}
