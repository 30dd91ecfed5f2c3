#include "cctree/tokens.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace cctree {

namespace {

// Unicode code points with the White_Space property.
bool is_unicode_whitespace(std::uint32_t cp) {
  switch (cp) {
    case 0x0009: case 0x000A: case 0x000B: case 0x000C: case 0x000D:
    case 0x0020: case 0x0085: case 0x00A0: case 0x1680:
    case 0x2000: case 0x2001: case 0x2002: case 0x2003: case 0x2004:
    case 0x2005: case 0x2006: case 0x2007: case 0x2008: case 0x2009:
    case 0x200A: case 0x2028: case 0x2029: case 0x202F: case 0x205F:
    case 0x3000:
      return true;
    default:
      return false;
  }
}

// Decodes one UTF-8 code point at `i`; on malformed bytes falls back to a
// single raw byte so arbitrary content still round-trips.
std::uint32_t decode_utf8(const std::string& s, std::size_t i, std::size_t& len) {
  unsigned char c = static_cast<unsigned char>(s[i]);
  std::size_t need = 0;
  std::uint32_t cp = 0;
  if (c < 0x80) {
    len = 1;
    return c;
  } else if ((c & 0xE0) == 0xC0) {
    need = 1;
    cp = c & 0x1F;
  } else if ((c & 0xF0) == 0xE0) {
    need = 2;
    cp = c & 0x0F;
  } else if ((c & 0xF8) == 0xF0) {
    need = 3;
    cp = c & 0x07;
  } else {
    len = 1;
    return c;
  }
  if (i + need >= s.size()) {
    len = 1;
    return c;
  }
  for (std::size_t k = 1; k <= need; ++k) {
    unsigned char cont = static_cast<unsigned char>(s[i + k]);
    if ((cont & 0xC0) != 0x80) {
      len = 1;
      return c;
    }
    cp = (cp << 6) | (cont & 0x3F);
  }
  len = need + 1;
  return cp;
}

std::string underscore_whitespace(const std::string& raw) {
  std::string out;
  out.reserve(raw.size());
  std::size_t i = 0;
  while (i < raw.size()) {
    std::size_t len = 0;
    std::uint32_t cp = decode_utf8(raw, i, len);
    if (is_unicode_whitespace(cp))
      out.push_back('_');
    else
      out.append(raw, i, len);
    i += len;
  }
  return out;
}

std::string escape_tsv(const std::string& raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string unescape_tsv(const std::string& escaped) {
  std::string out;
  out.reserve(escaped.size());
  for (std::size_t i = 0; i < escaped.size(); ++i) {
    if (escaped[i] != '\\' || i + 1 == escaped.size()) {
      out.push_back(escaped[i]);
      continue;
    }
    ++i;
    switch (escaped[i]) {
      case '\\': out.push_back('\\'); break;
      case 't': out.push_back('\t'); break;
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      default: out.push_back(escaped[i]);
    }
  }
  return out;
}

}  // namespace

TokenSequence normalize_sequence(const TokenSequence& seq) {
  TokenSequence out;
  out.reserve(seq.size());
  for (const std::string& item : seq) {
    FlatItem parts = split_flat_item(item);
    if (parts.kind == "string_literal" && parts.token_escaped) {
      std::string raw = unescape_flat_token(*parts.token_escaped);
      out.push_back(parts.kind + "|" + escape_flat_token(underscore_whitespace(raw)));
    } else {
      out.push_back(item);
    }
  }
  return out;
}

std::uint64_t df_threshold(double fraction, std::uint64_t corpus_size) {
  if (!(fraction > 0.0) || fraction > 1.0)
    throw std::invalid_argument("min_df_fraction must be in (0, 1]");
  constexpr std::uint64_t kScale = 1000000000ull;
  auto numerator = static_cast<std::uint64_t>(std::llround(fraction * static_cast<double>(kScale)));
  if (numerator == 0) numerator = 1;
  unsigned __int128 product =
      static_cast<unsigned __int128>(numerator) * static_cast<unsigned __int128>(corpus_size);
  auto threshold = static_cast<std::uint64_t>((product + (kScale - 1)) / kScale);
  return threshold == 0 ? 1 : threshold;
}

Vocabulary build_vocabulary(const std::vector<TokenSequence>& corpus, double min_df_fraction) {
  if (corpus.empty()) throw EmptyCorpus("build_vocabulary: corpus has no sequences");
  std::uint64_t threshold = df_threshold(min_df_fraction, corpus.size());

  std::map<std::string, std::uint64_t> df;
  for (const TokenSequence& seq : corpus) {
    std::set<std::string_view> seen;
    for (const std::string& item : seq) seen.insert(item);
    for (std::string_view item : seen) ++df[std::string(item)];
  }

  Vocabulary vocab;
  vocab.corpus_size = corpus.size();
  vocab.min_df_fraction = min_df_fraction;
  for (auto& [term, count] : df)
    if (count >= threshold) vocab.terms.emplace(term, count);
  return vocab;
}

TokenSequence apply_oov(const TokenSequence& seq, const Vocabulary& vocab,
                        const OovPolicy& policy) {
  TokenSequence out;
  out.reserve(seq.size());
  for (const std::string& item : seq)
    out.push_back(vocab.contains(item) ? item : policy.oov_symbol);
  return out;
}

void save_vocabulary(const Vocabulary& vocab, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw VocabIoError("cannot open for writing: " + path);
  char fraction[64];
  std::snprintf(fraction, sizeof fraction, "%.17g", vocab.min_df_fraction);
  file << "#cctree-vocab\tv1\tcorpus_size=" << vocab.corpus_size
       << "\tmin_df_fraction=" << fraction << "\n";
  for (const auto& [term, df] : vocab.terms)
    file << escape_tsv(term) << "\t" << df << "\n";
  if (!file.flush()) throw VocabIoError("write failed: " + path);
}

Vocabulary load_vocabulary(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw VocabIoError("cannot open: " + path);
  std::string header;
  if (!std::getline(file, header)) throw VocabIoError("missing header: " + path);

  Vocabulary vocab;
  std::istringstream hs(header);
  std::string magic, version, field;
  if (!std::getline(hs, magic, '\t') || magic != "#cctree-vocab" ||
      !std::getline(hs, version, '\t') || version != "v1")
    throw VocabIoError("not a cctree vocabulary file: " + path);
  while (std::getline(hs, field, '\t')) {
    auto eq = field.find('=');
    if (eq == std::string::npos) throw VocabIoError("malformed header field: " + field);
    std::string key = field.substr(0, eq);
    std::string val = field.substr(eq + 1);
    if (key == "corpus_size")
      vocab.corpus_size = std::stoull(val);
    else if (key == "min_df_fraction")
      vocab.min_df_fraction = std::stod(val);
    else
      throw VocabIoError("unknown header field: " + key);
  }

  std::string line;
  while (std::getline(file, line)) {
    if (line.empty()) continue;
    auto tab = line.rfind('\t');
    if (tab == std::string::npos) throw VocabIoError("malformed row: " + line);
    std::string term = unescape_tsv(line.substr(0, tab));
    std::uint64_t df = std::stoull(line.substr(tab + 1));
    vocab.terms.emplace(std::move(term), df);
  }
  return vocab;
}

}  // namespace cctree
