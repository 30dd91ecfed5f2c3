#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace cctree {

// Hand-rolled draws on top of mt19937_64. std::shuffle and the std
// distributions are implementation-defined, which would make "same seed,
// same bytes" contracts depend on the standard library version.
inline double rand01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::size_t rand_below(std::mt19937_64& rng, std::size_t n) {
  return n == 0 ? 0 : static_cast<std::size_t>(rng() % n);
}

template <typename T>
void shuffle_vec(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = rand_below(rng, i);
    std::swap(v[i - 1], v[j]);
  }
}

template <typename T>
const T& pick(const std::vector<T>& v, std::mt19937_64& rng) {
  return v[rand_below(rng, v.size())];
}

}  // namespace cctree
