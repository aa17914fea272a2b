#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace pvmppt::rng {

// Uniform in [0, 1). Draws bits directly so streams are identical across
// standard library implementations (std distributions are not portable).
inline double unit(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& engine, double lo, double hi) {
  return lo + (hi - lo) * unit(engine);
}

// Bounded draw; modulo bias is ~2^-64 and irrelevant for shuffling.
inline std::uint64_t below(std::mt19937_64& engine, std::uint64_t n) {
  return engine() % n;
}

template <typename T>
void shuffle(std::vector<T>& values, std::mt19937_64& engine) {
  for (std::size_t i = values.size(); i > 1; --i) {
    std::swap(values[i - 1], values[below(engine, i)]);
  }
}

}  // namespace pvmppt::rng
