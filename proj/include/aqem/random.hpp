#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace aqem {

/// Identifies one reproducible random stream.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;

    friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

/// Mixes a list of words into a single stream id (SplitMix64 finalizer chain).
/// Used to derive per-(generation, member) or per-(rung, repetition) streams.
std::uint64_t derive_stream_id(std::initializer_list<std::uint64_t> words);

/// Deterministic random stream. Identical SeedSpec gives an identical sequence
/// on every platform: the engine is mt19937_64 seeded through std::seed_seq, and
/// the float conversions below are spelled out rather than left to <random>.
class RandomStream {
public:
    explicit RandomStream(SeedSpec spec);

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n);

    const SeedSpec& spec() const { return spec_; }

private:
    SeedSpec spec_;
    std::mt19937_64 engine_;
};

inline RandomStream rng_stream(SeedSpec spec) {
    return RandomStream(spec);
}

}  // namespace aqem
