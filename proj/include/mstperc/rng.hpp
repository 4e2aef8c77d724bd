#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace mstperc {

/// SplitMix64 finalizer. Used to derive independent stream seeds from a
/// root seed and a counter so that trial i is replayable on its own.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t root, std::uint64_t index) {
  return mix64(mix64(root) ^ mix64(index + 0x632be59bd9b4e019ull));
}

/// Thin wrapper over mt19937_64 with a portable [0,1) -> (0,1) mapping.
/// std::uniform_real_distribution is implementation-defined, which would
/// break bit-reproducibility across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Open interval (0,1): never returns exactly 0 or 1.
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  double exponential(double rate) { return -std::log(uniform()) / rate; }

  bool coin() { return (engine_() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mstperc
