#include "cctree/embed.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>

#include "cctree/hash.hpp"
#include "cctree/rng.hpp"

namespace cctree {

namespace {

constexpr char kMagic[4] = {'C', 'C', 'T', 'V'};
constexpr std::uint16_t kFormatVersion = 1;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void append_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

void append_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void append_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void append_f32(std::string& out, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  append_u32(out, bits);
}

// Bounds-checked little-endian reader; any overrun means a truncated file.
class ByteReader {
 public:
  ByteReader(const std::string& data, std::size_t pos) : data_(data), pos_(pos) {}

  std::uint16_t u16() { return static_cast<std::uint16_t>(read_le(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(read_le(4)); }
  std::uint64_t u64() { return read_le(8); }

  float f32() {
    std::uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
  }

  std::string bytes(std::size_t n) {
    need(n);
    std::string out = data_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  std::size_t pos() const { return pos_; }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > data_.size()) throw CorruptFile("model file is truncated");
  }

  std::uint64_t read_le(std::size_t n) {
    need(n);
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < n; ++i)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    pos_ += n;
    return v;
  }

  const std::string& data_;
  std::size_t pos_;
};

std::size_t noise_sample(const std::vector<double>& cdf, std::mt19937_64& rng) {
  double u = rand01(rng) * cdf.back();
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) --it;
  return static_cast<std::size_t>(it - cdf.begin());
}

}  // namespace

void EmbeddingModel::index_terms() {
  term_index_.clear();
  term_index_.reserve(terms_.size());
  for (std::uint32_t i = 0; i < terms_.size(); ++i) term_index_.emplace(terms_[i], i);
}

void EmbeddingModel::rebuild_noise() {
  noise_cdf_.clear();
  noise_cdf_.reserve(counts_.size());
  double total = 0.0;
  for (std::uint64_t c : counts_) {
    total += std::pow(static_cast<double>(c), 0.75);
    noise_cdf_.push_back(total);
  }
}

std::uint64_t EmbeddingModel::compute_fingerprint() const {
  Fnv64 fnv;
  fnv.feed_u64(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    fnv.feed_u64(terms_[i].size());
    fnv.feed(terms_[i]);
    fnv.feed_u64(counts_[i]);
  }
  return fnv.value();
}

EmbeddingModel EmbeddingModel::train(const std::vector<TokenSequence>& corpus,
                                     const EmbedConfig& config) {
  if (corpus.empty()) throw EmptyCorpus("train: corpus has no sequences");
  if (config.dim < 1 || config.epochs < 1)
    throw std::invalid_argument("train: dim and epochs must be at least 1");

  std::map<std::string, std::uint64_t> counts;
  std::size_t total_tokens = 0;
  for (const TokenSequence& seq : corpus) {
    for (const std::string& item : seq) {
      ++counts[item];
      ++total_tokens;
    }
  }
  if (counts.size() < 2)
    throw DegenerateVocabulary("train: corpus has fewer than 2 distinct terms");

  EmbeddingModel model;
  model.config_ = config;
  model.terms_.reserve(counts.size());
  model.counts_.reserve(counts.size());
  for (const auto& [term, count] : counts) {
    model.terms_.push_back(term);
    model.counts_.push_back(count);
  }
  model.index_terms();
  model.rebuild_noise();

  const std::size_t dim = config.dim;
  model.weights_.assign(model.terms_.size() * dim, 0.0f);

  std::mt19937_64 rng(config.seed);
  std::vector<std::vector<float>> doc_vecs(corpus.size());
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    doc_vecs[d].resize(dim);
    for (std::size_t j = 0; j < dim; ++j)
      doc_vecs[d][j] = static_cast<float>((rand01(rng) - 0.5) / static_cast<double>(dim));
  }

  const double lr0 = config.learning_rate;
  const std::uint64_t total_steps =
      static_cast<std::uint64_t>(config.epochs) * static_cast<std::uint64_t>(total_tokens);
  std::uint64_t processed = 0;
  std::vector<double> grad(dim);

  for (std::uint32_t epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t d = 0; d < corpus.size(); ++d) {
      float* dv = doc_vecs[d].data();
      for (const std::string& item : corpus[d]) {
        double lr = lr0 * (1.0 - 0.9 * (static_cast<double>(processed) /
                                        static_cast<double>(total_steps)));
        ++processed;
        std::uint32_t target = model.term_index_.at(item);
        std::fill(grad.begin(), grad.end(), 0.0);

        float* wt = model.weights_.data() + static_cast<std::size_t>(target) * dim;
        double f = 0.0;
        for (std::size_t j = 0; j < dim; ++j) f += static_cast<double>(dv[j]) * wt[j];
        double g = (1.0 - sigmoid(f)) * lr;
        for (std::size_t j = 0; j < dim; ++j) {
          grad[j] += g * wt[j];
          wt[j] += static_cast<float>(g * dv[j]);
        }

        for (std::uint32_t k = 0; k < config.negative_samples; ++k) {
          std::size_t neg = noise_sample(model.noise_cdf_, rng);
          if (neg == target) continue;
          float* wn = model.weights_.data() + neg * dim;
          double fn = 0.0;
          for (std::size_t j = 0; j < dim; ++j) fn += static_cast<double>(dv[j]) * wn[j];
          double gn = (0.0 - sigmoid(fn)) * lr;
          for (std::size_t j = 0; j < dim; ++j) {
            grad[j] += gn * wn[j];
            wn[j] += static_cast<float>(gn * dv[j]);
          }
        }

        for (std::size_t j = 0; j < dim; ++j) dv[j] += static_cast<float>(grad[j]);
      }
    }
  }

  model.fingerprint_ = model.compute_fingerprint();
  return model;
}

std::vector<double> EmbeddingModel::infer(const TokenSequence& seq) const {
  const std::size_t dim = config_.dim;
  std::vector<double> vec(dim, 0.0);

  std::vector<std::uint32_t> known;
  known.reserve(seq.size());
  for (const std::string& item : seq) {
    auto it = term_index_.find(item);
    if (it != term_index_.end()) known.push_back(it->second);
  }
  if (known.empty()) return vec;

  std::mt19937_64 rng(mix_seed(config_.seed, fnv1a64("infer")));
  for (std::size_t j = 0; j < dim; ++j)
    vec[j] = (rand01(rng) - 0.5) / static_cast<double>(dim);

  const double lr0 = config_.learning_rate;
  const std::uint64_t total_steps =
      static_cast<std::uint64_t>(config_.infer_epochs) * known.size();
  std::uint64_t processed = 0;
  std::vector<double> grad(dim);

  for (std::uint32_t epoch = 0; epoch < config_.infer_epochs; ++epoch) {
    for (std::uint32_t target : known) {
      double lr = lr0 * (1.0 - 0.9 * (static_cast<double>(processed) /
                                      static_cast<double>(total_steps)));
      ++processed;
      std::fill(grad.begin(), grad.end(), 0.0);

      const float* wt = weights_.data() + static_cast<std::size_t>(target) * dim;
      double f = 0.0;
      for (std::size_t j = 0; j < dim; ++j) f += vec[j] * wt[j];
      double g = (1.0 - sigmoid(f)) * lr;
      for (std::size_t j = 0; j < dim; ++j) grad[j] += g * wt[j];

      for (std::uint32_t k = 0; k < config_.negative_samples; ++k) {
        std::size_t neg = noise_sample(noise_cdf_, rng);
        if (neg == target) continue;
        const float* wn = weights_.data() + neg * dim;
        double fn = 0.0;
        for (std::size_t j = 0; j < dim; ++j) fn += vec[j] * wn[j];
        double gn = (0.0 - sigmoid(fn)) * lr;
        for (std::size_t j = 0; j < dim; ++j) grad[j] += gn * wn[j];
      }

      for (std::size_t j = 0; j < dim; ++j) vec[j] += grad[j];
    }
  }
  return vec;
}

void EmbeddingModel::save(const std::string& path) const {
  std::string buf;
  buf.append(kMagic, 4);
  append_u16(buf, kFormatVersion);
  append_u32(buf, config_.dim);
  append_u32(buf, config_.epochs);
  append_u32(buf, config_.negative_samples);
  append_f32(buf, config_.learning_rate);
  append_u32(buf, config_.infer_epochs);
  append_u64(buf, config_.seed);
  append_u64(buf, fingerprint_);
  append_u32(buf, static_cast<std::uint32_t>(terms_.size()));
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    append_u32(buf, static_cast<std::uint32_t>(terms_[i].size()));
    buf += terms_[i];
    append_u64(buf, counts_[i]);
  }
  for (float w : weights_) append_f32(buf, w);
  append_u64(buf, fnv1a64(buf));

  std::ofstream file(path, std::ios::binary);
  if (!file) throw CorruptFile("cannot open for writing: " + path);
  file.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!file.flush()) throw CorruptFile("write failed: " + path);
}

EmbeddingModel EmbeddingModel::load(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw CorruptFile("cannot open: " + path);
  std::string data((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());

  if (data.size() < 6 || std::memcmp(data.data(), kMagic, 4) != 0)
    throw CorruptFile("not a cctree model file");
  // Version is judged before the checksum so a newer format is reported as
  // such rather than as corruption.
  std::uint16_t version = static_cast<std::uint16_t>(
      static_cast<unsigned char>(data[4]) | (static_cast<unsigned char>(data[5]) << 8));
  if (version != kFormatVersion)
    throw VersionMismatch("unsupported model format version " + std::to_string(version));

  if (data.size() < 14) throw CorruptFile("model file is truncated");
  std::string body = data.substr(0, data.size() - 8);
  ByteReader tail(data, data.size() - 8);
  if (tail.u64() != fnv1a64(body)) throw CorruptFile("model file checksum mismatch");

  ByteReader reader(body, 6);
  EmbeddingModel model;
  model.config_.dim = reader.u32();
  model.config_.epochs = reader.u32();
  model.config_.negative_samples = reader.u32();
  model.config_.learning_rate = reader.f32();
  model.config_.infer_epochs = reader.u32();
  model.config_.seed = reader.u64();
  model.fingerprint_ = reader.u64();
  std::uint32_t term_count = reader.u32();
  model.terms_.reserve(term_count);
  model.counts_.reserve(term_count);
  for (std::uint32_t i = 0; i < term_count; ++i) {
    std::uint32_t len = reader.u32();
    model.terms_.push_back(reader.bytes(len));
    model.counts_.push_back(reader.u64());
  }
  std::size_t weight_count = static_cast<std::size_t>(term_count) * model.config_.dim;
  model.weights_.reserve(weight_count);
  for (std::size_t i = 0; i < weight_count; ++i) model.weights_.push_back(reader.f32());
  if (reader.pos() != body.size()) throw CorruptFile("model file has trailing bytes");

  model.index_terms();
  model.rebuild_noise();
  if (model.compute_fingerprint() != model.fingerprint_)
    throw CorruptFile("vocabulary fingerprint mismatch");
  return model;
}

}  // namespace cctree
