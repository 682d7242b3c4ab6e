#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace reps {

// splitmix64 finalizer; used both as a seed mixer and as the string hash for
// deriving named sub-streams.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_label(std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// All randomness flows through explicit seeds. Each stage (scoring noise,
// synthesis noise, sampling, attacks, splits) derives its own sub-seed from
// the master seed and a stage label, so stages can be reordered or
// parallelized without perturbing each other's streams.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view stage) {
  return mix64(master ^ hash_label(stage));
}

inline std::uint64_t derive_seed(std::uint64_t master, std::string_view stage,
                                 std::uint64_t index) {
  return mix64(mix64(master ^ hash_label(stage)) + index);
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(mix64(seed)); }

}  // namespace reps
