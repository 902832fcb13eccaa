#ifndef IFSTBC_RNG_HPP
#define IFSTBC_RNG_HPP

#include <cmath>
#include <cstdint>

// Deterministic, platform-independent randomness.  std::mt19937 +
// std::normal_distribution are not bit-stable across standard libraries, so
// simulations use xoshiro256** seeded through splitmix64 and an explicit
// Box-Muller transform.  All mappings from 64-bit words to doubles are spelled
// out so a stream is reproducible byte for byte anywhere.

namespace ifstbc {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stable per-trial seed derivation: fold stream/index into the master seed so
// trial t of SNR point p sees the same draws no matter how work is scheduled.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
  std::uint64_t s = master;
  std::uint64_t a = splitmix64_next(s);
  s ^= stream * 0x9e3779b97f4a7c15ULL;
  std::uint64_t b = splitmix64_next(s);
  s ^= index * 0xd1342543de82ef95ULL;
  std::uint64_t c = splitmix64_next(s);
  return a ^ (b << 1) ^ c;
}

class Xoshiro256ss {
 public:
  explicit Xoshiro256ss(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (int i = 0; i < 4; ++i) s_[i] = splitmix64_next(sm);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0,1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform over {0, ..., m-1} for m a power of two.
  std::uint64_t uniform_pow2(std::uint64_t m) { return next() & (m - 1); }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}

  // Standard normal via Box-Muller; u1 is mapped into (0,1] so log() is safe.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = (static_cast<double>(rng_.next() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(rng_.next() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  Xoshiro256ss& raw() { return rng_; }

 private:
  Xoshiro256ss rng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace ifstbc

#endif
