#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace atcsim {

uint64_t fnv1a64(std::string_view s);
uint64_t splitmix64(uint64_t x);

// One independently seeded draw sequence. All sampling goes through the
// methods below rather than <random> distribution objects, whose draw
// sequences differ across standard library implementations; the generator
// itself (mt19937_64) is bit-exact everywhere.
class RngStream {
 public:
  RngStream() : eng_(0) {}
  explicit RngStream(uint64_t seed) : eng_(seed) {}

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi], inclusive.
  int64_t uniform_int(int64_t lo, int64_t hi);

  bool bernoulli(double p);

  uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

// Derives the seed for a named stream from the master seed. Streams are
// separated by name so that enabling one stochastic feature never shifts the
// draws of another.
uint64_t derive_seed(uint64_t master_seed, std::string_view stream_name);

inline RngStream derive_stream(uint64_t master_seed, std::string_view name) {
  return RngStream(derive_seed(master_seed, name));
}

}  // namespace atcsim
