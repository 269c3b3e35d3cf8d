#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace proxnet::detail {

// SplitMix64 mixing step. Used to turn (seed, stream-index) pairs into
// decorrelated engine seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent engine for stream `stream` under master seed `seed`.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64{splitmix64(splitmix64(seed) + stream)};
}

// Draw in [0, n). std::uniform_int_distribution is implementation-defined,
// so outputs would not be stable across standard libraries; a plain modulo
// draw is (the bias at 64 bits is irrelevant here).
inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  return rng() % n;
}

// Uniform double in [0, 1), 53 random bits.
inline double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Fisher-Yates with the bounded draw above (std::shuffle is likewise
// implementation-defined).
template <typename T>
void shuffle(std::vector<T>& values, std::mt19937_64& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    std::swap(values[i - 1], values[bounded(rng, i)]);
  }
}

}  // namespace proxnet::detail
