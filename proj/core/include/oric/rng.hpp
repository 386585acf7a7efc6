#pragma once
// Seeded PRNG with cheap independent substreams.
//
// Chain generation derives one substream per (run seed, chain index), so the
// result of a run is independent of thread count and iteration order. The
// engine is SplitMix64: 3 ops per draw, full 64-bit state, and — unlike the
// std distributions — bit-identical output on every platform.

#include <cstdint>

namespace oric {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += kGolden;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

class Rng {
public:
    Rng() = default;
    explicit Rng(std::uint64_t seed) : state_(splitmix64(seed)) {}

    // Substream `stream` of `seed`; distinct streams are decorrelated by the
    // double mix.
    Rng(std::uint64_t seed, std::uint64_t stream)
        : state_(splitmix64(splitmix64(seed) ^ (stream * kGolden + 1))) {}

    std::uint64_t next_u64() {
        state_ += kGolden;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n). Multiply-shift; bias is n/2^64, negligible here.
    std::uint64_t uniform_index(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::uint64_t state_ = 0x853C49E6748FEA9Bull;
};

// Derives the chain-run seed for one (period, class) of an update, so that
// replaying a single period's chains is possible without replaying history.
inline std::uint64_t chain_run_seed(std::uint64_t base_seed, std::uint32_t period,
                                    int label) {
    return splitmix64(splitmix64(base_seed + kGolden * period) ^
                      static_cast<std::uint64_t>(label + 1));
}

} // namespace oric
