#pragma once

#include <cstdint>
#include <random>

namespace qauth {

// Deterministic random stream. Only the raw engine output is used so that
// sequences are identical across standard library implementations.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1) with 53 bits of resolution.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform01() < p; }

    std::uint8_t bit() { return static_cast<std::uint8_t>(engine_() >> 63); }

    // Uniform on [0, n). n must be non-zero.
    std::uint64_t uniform_index(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
        std::uint64_t x = engine_();
        while (x >= limit) {
            x = engine_();
        }
        return x % n;
    }

  private:
    std::mt19937_64 engine_;
};

// SplitMix64 finalizer; used to derive independent per-party stream seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

enum class StreamId : std::uint64_t {
    alice = 1,
    bob = 2,
    noise = 3,
    eve = 4,
    eve_source = 5,
    eve_measure = 6,
    eve_noise = 7,
};

inline RandomStream derive_stream(std::uint64_t session_seed, StreamId id) {
    return RandomStream(mix_seed(mix_seed(session_seed) ^ static_cast<std::uint64_t>(id)));
}

}  // namespace qauth
