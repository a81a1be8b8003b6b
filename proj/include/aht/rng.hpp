#pragma once

#include <cstdint>
#include <string_view>

namespace aht {

// Counter-style splittable PRNG built on splitmix64. Sub-streams are derived
// from the original seed (not the advanced state), so adding draws to one
// stream never perturbs siblings.
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), state_(seed) {}

  uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  // [0, 1)
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // [0, n)
  uint32_t uniform_int(uint32_t n) {
    return n ? uint32_t(next_u64() % n) : 0;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  Rng sub(std::string_view name) const {
    return Rng(mix(seed_ ^ fnv1a(name)));
  }
  Rng sub(uint64_t idx) const {
    return Rng(mix(seed_ ^ mix(idx + 0x1234567)));
  }

  uint64_t seed() const { return seed_; }

 private:
  static uint64_t mix(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  static uint64_t fnv1a(std::string_view s) {
    uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : s) {
      h ^= uint8_t(c);
      h *= 0x100000001B3ULL;
    }
    return h;
  }

  uint64_t seed_;
  uint64_t state_;
};

}  // namespace aht
