#pragma once

#include <cstdint>
#include <random>

namespace euro {

// Deterministic random stream.  Wraps std::mt19937_64 (whose output sequence
// is fully specified by the standard) and derives all variates from raw
// 64-bit draws, so results are bit-identical across platforms and across
// thread layouts as long as streams are derived per work item.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent stream for work item `stream` under a master seed.
  // splitmix64 mixing keeps nearby (seed, stream) pairs decorrelated.
  static Rng derive(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return Rng(z ^ (z >> 31));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound), bound >= 1.  Rejection-free modulo is fine
  // here: bound is tiny relative to 2^64 in every use below.
  int next_int(int bound) {
    return static_cast<int>(engine_() % static_cast<std::uint64_t>(bound));
  }

  bool next_coin() { return (engine_() & 1u) != 0; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace euro
