#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace word2api {

// SplitMix64 finalizer; used to derive independent engine seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic sub-stream `id` of a run-level seed. Streams with distinct
// ids are independent, so per-tuple or per-worker output does not depend on
// processing order.
inline std::mt19937_64 seeded_stream(std::uint64_t seed, std::uint64_t id) {
  return std::mt19937_64(splitmix64(splitmix64(seed) + id));
}

// Unbiased draw from [0, n), n >= 1. std::uniform_int_distribution is not
// bit-specified by the standard, so outputs would differ across stdlibs.
inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
  for (;;) {
    const std::uint64_t x = rng();
    if (x >= threshold) return x % n;
  }
}

// 53-bit uniform in [0, 1).
inline double unit_real(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <class T>
void fisher_yates(std::span<T> items, std::mt19937_64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[bounded(rng, i)]);
  }
}

}  // namespace word2api
