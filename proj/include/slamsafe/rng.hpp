#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace slamsafe {

// All randomness in the project flows through named streams derived from a
// single base seed, so any component can be re-run in isolation and whole
// pipelines are reproducible bit-for-bit. Draws are generated directly from
// the raw engine output (never through std:: distributions, whose results
// vary across standard libraries).

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Stable seed for a named substream of `base`.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view stream) {
    std::uint64_t state = base ^ fnv1a64(stream);
    return splitmix64(state);
}

// xoshiro256** (Blackman & Vigna), seeded via splitmix64.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : s_) word = splitmix64(sm);
    }
    RngStream(std::uint64_t base, std::string_view stream)
        : RngStream(derive_seed(base, stream)) {}

    std::uint64_t next_u64() {
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

    // Uniform in [0, 1) with 53 bits of precision.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Uniform in [0, n). Modulo bias is < 2^-50 for the small n used here.
    std::uint64_t bounded(std::uint64_t n) { return n ? next_u64() % n : 0; }

    bool bernoulli(double p) { return next_double() < p; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4]{};
};

}  // namespace slamsafe
