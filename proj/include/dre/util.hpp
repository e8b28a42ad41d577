#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dre {

// Thrown on violated preconditions of public operations.
class precondition_error : public std::invalid_argument {
public:
  explicit precondition_error(const std::string& what) : std::invalid_argument(what) {}
};

// Thrown when an internal invariant that theory guarantees fails to hold.
class invariant_error : public std::logic_error {
public:
  explicit invariant_error(const std::string& what) : std::logic_error(what) {}
};

#define DRE_REQUIRE(cond, msg)                                                 \
  do {                                                                         \
    if (!(cond)) throw ::dre::precondition_error(msg);                         \
  } while (0)

#define DRE_INVARIANT(cond, msg)                                               \
  do {                                                                         \
    if (!(cond)) throw ::dre::invariant_error(msg);                            \
  } while (0)

// 64-bit avalanche mixer; the workhorse behind site uniforms and seed derivation.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derived stream seed for trial t of a run keyed by base.
inline uint64_t derive_seed(uint64_t base, uint64_t index) {
  return splitmix64(base ^ splitmix64(index + 0x51ed270051ed2700ULL));
}

// Small deterministic RNG for sampling in tests, validators and bootstrap.
class Rng {
public:
  explicit Rng(uint64_t seed) : state_(splitmix64(seed ^ 0xa02bdbf7bb3c0a7ULL)) {}

  uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound).
  uint64_t next_below(uint64_t bound) { return bound ? next_u64() % bound : 0; }

  double next_unit() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [lo, hi] inclusive.
  int64_t next_int(int64_t lo, int64_t hi) {
    return lo + int64_t(next_below(uint64_t(hi - lo + 1)));
  }

private:
  uint64_t state_;
};

// SHA-256 of a byte string, lowercase hex. Used for run-manifest content hashes.
std::string sha256_hex(const std::string& data);

}  // namespace dre
