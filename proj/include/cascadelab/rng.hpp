#ifndef CASCADELAB_RNG_HPP
#define CASCADELAB_RNG_HPP

#include <cstdint>
#include <random>

namespace cascadelab {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to derive well-separated substream seeds from a
// master seed so that per-item work is reproducible regardless of scheduling.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag,
                                    std::uint64_t index = 0,
                                    std::uint64_t subindex = 0) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ tag);
  h = splitmix64(h ^ index);
  h = splitmix64(h ^ subindex);
  return h;
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

// Stream tags keep independent uses of one master seed decoupled.
namespace stream {
constexpr std::uint64_t graph = 1;
constexpr std::uint64_t weights = 2;
constexpr std::uint64_t train_seeds = 3;
constexpr std::uint64_t simulate = 4;
constexpr std::uint64_t corrupt = 5;
constexpr std::uint64_t rates = 6;
constexpr std::uint64_t features = 7;
constexpr std::uint64_t live_edge = 8;
constexpr std::uint64_t test_seeds = 9;
constexpr std::uint64_t ground_truth = 10;
constexpr std::uint64_t eval = 11;
constexpr std::uint64_t shadow = 12;
}  // namespace stream

}  // namespace cascadelab

#endif
