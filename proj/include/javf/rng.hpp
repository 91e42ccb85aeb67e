#pragma once

#include <cstdint>

namespace javf {

// Every seeded draw in the library goes through this generator so that
// fingerprints and synthetic datasets reproduce bit-exactly across runs,
// platforms and reimplementations. The exact functions are pinned below;
// an independent implementation must match them to reproduce a database.
//
// State seeding (splitmix64), one step:
//   s += 0x9E3779B97F4A7C15
//   z  = s
//   z  = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z  = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   output z ^ (z >> 31)
//
// Stream (xoshiro256**), state s[0..3] = four splitmix64 steps from the seed:
//   result = rotl(s[1] * 5, 7) * 9
//   t = s[1] << 17
//   s[2] ^= s[0]; s[3] ^= s[1]; s[1] ^= s[2]; s[0] ^= s[3]
//   s[2] ^= t;    s[3] = rotl(s[3], 45)
//
// Bounded draw in [0, n): rejection sampling — reject x < (2^64 - n) mod n,
// then return x mod n. Unbiased and identical on every platform.

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class Xoshiro256ss {
  public:
    explicit Xoshiro256ss(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64_next(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Unbiased integer in [0, n). n must be nonzero.
    std::uint64_t bounded(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        std::uint64_t x = next();
        while (x < threshold) x = next();
        return x % n;
    }

    // Uniform double in [0, 1), 53 mantissa bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
};

} // namespace javf
