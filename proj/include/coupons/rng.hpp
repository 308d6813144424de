#pragma once

// Deterministic randomness plumbing. Every randomized routine in this project
// draws from an RngStream, so a (generator, master seed, stream index, draw
// sequence) tuple yields identical results on every platform and under any
// worker count.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string_view>

namespace coupons {

// SplitMix64 output at position `index` of the stream seeded with `state`.
// Used only to spread a master seed into well-separated per-stream seeds.
[[nodiscard]] constexpr std::uint64_t splitmix64_at(std::uint64_t state,
                                                    std::uint64_t index) noexcept {
    std::uint64_t z = state + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// A deterministic pseudorandom stream: std::mt19937_64 (whose output sequence
// is pinned down bit-for-bit by the C++ standard) with Lemire's unbiased
// bounded draw on top. std::uniform_int_distribution is implementation
// defined and must not be used anywhere results matter.
class RngStream {
public:
    // Identity string recorded in experiment output metadata.
    static constexpr std::string_view kGeneratorId =
        "mt19937_64/splitmix64-substreams/lemire-bounded";

    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    // Independent sub-stream keyed by (master seed, stream index). Trial i of
    // an experiment always uses substream(master, i), so results cannot
    // depend on which worker runs the trial.
    [[nodiscard]] static RngStream substream(std::uint64_t master_seed,
                                             std::uint64_t stream_index) {
        return RngStream(splitmix64_at(master_seed, stream_index));
    }

    std::uint64_t next() { return engine_(); }

    // Uniform draw from [0, bound), bound >= 1. Multiply-shift with rejection;
    // unbiased, and consumes engine words deterministically.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) {
            throw std::domain_error("RngStream::below: bound must be positive");
        }
        unsigned __int128 product =
            static_cast<unsigned __int128>(next()) * bound;
        auto low = static_cast<std::uint64_t>(product);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                product = static_cast<unsigned __int128>(next()) * bound;
                low = static_cast<std::uint64_t>(product);
            }
        }
        return static_cast<std::uint64_t>(product >> 64);
    }

    // Uniform double in [0, 1) from the top 53 bits of one engine word.
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

}  // namespace coupons
