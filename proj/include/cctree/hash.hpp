#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace cctree {

// Incremental FNV-1a (64-bit). The byte framing fed into this is part of the
// persisted model format and of path-key hashing, so keep it stable.
class Fnv64 {
 public:
  void feed(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      state_ ^= p[i];
      state_ *= kPrime;
    }
  }
  void feed(std::string_view s) { feed(s.data(), s.size()); }
  void feed_u64(std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    feed(b, 8);
  }
  std::uint64_t value() const { return state_; }

 private:
  static constexpr std::uint64_t kPrime = 1099511628211ULL;
  std::uint64_t state_ = 14695981039346656037ULL;
};

inline std::uint64_t fnv1a64(std::string_view s) {
  Fnv64 h;
  h.feed(s);
  return h.value();
}

// splitmix64-style combiner for deriving independent sub-seeds.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9E3779B97F4A7C15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Named sub-stream of a base seed, e.g. derive_seed(seed, "upsample", fold).
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view tag,
                                 std::uint64_t index = 0) {
  return mix_seed(mix_seed(base, fnv1a64(tag)), index);
}

}  // namespace cctree
