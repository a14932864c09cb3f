#pragma once

#include <cstdint>
#include <random>

namespace cmcast {

// Deterministic random stream. Wraps std::mt19937_64 but hand-rolls the
// uniform mappings so identical seeds give identical sequences on every
// platform (the std distribution objects are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound). bound must be positive.
  std::uint64_t next_below(std::uint64_t bound) {
    // rejection sampling, unbiased
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  int next_int(int bound) { return static_cast<int>(next_below(static_cast<std::uint64_t>(bound))); }

 private:
  std::mt19937_64 engine_;
};

// splitmix64 finalizer, used to hash seed components into substream seeds.
inline std::uint64_t mix_u64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derive an independent stream seed from a master seed and up to three
// component identifiers (e.g. cache-size index, trial index, purpose tag).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t h = mix_u64(master);
  h = mix_u64(h ^ a);
  h = mix_u64(h ^ b);
  h = mix_u64(h ^ c);
  return h;
}

}  // namespace cmcast
