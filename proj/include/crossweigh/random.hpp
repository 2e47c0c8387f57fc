#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace crossweigh {

// splitmix64 finalizer; used to derive independent stream seeds from a
// single master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(master ^ splitmix64(stream));
}

// Unbiased draw in [0, n). Rejection sampling with a fixed algorithm so
// seeded results do not depend on standard library distribution internals.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
  for (;;) {
    std::uint64_t r = rng();
    if (r >= threshold) return r % n;
  }
}

// Fisher-Yates shuffle driven by uniform_below; portable across toolchains.
template <typename T>
void shuffle_in_place(std::vector<T>& values, std::mt19937_64& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace crossweigh
