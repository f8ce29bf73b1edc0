#include "aqem/random.hpp"

#include <array>

namespace aqem {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_stream_id(std::initializer_list<std::uint64_t> words) {
    std::uint64_t h = 0x6a09e667f3bcc908ULL;
    for (std::uint64_t w : words) {
        h = splitmix64(h ^ splitmix64(w));
    }
    return h;
}

RandomStream::RandomStream(SeedSpec spec) : spec_(spec) {
    const std::array<std::uint32_t, 4> words{
        static_cast<std::uint32_t>(spec.master_seed),
        static_cast<std::uint32_t>(spec.master_seed >> 32),
        static_cast<std::uint32_t>(spec.stream_id),
        static_cast<std::uint32_t>(spec.stream_id >> 32),
    };
    std::seed_seq seq(words.begin(), words.end());
    engine_.seed(seq);
}

std::uint64_t RandomStream::below(std::uint64_t n) {
    // Rejection sampling on the top of the range keeps the draw unbiased.
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x = engine_();
    while (x >= limit) {
        x = engine_();
    }
    return x % n;
}

}  // namespace aqem
