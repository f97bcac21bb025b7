#pragma once

#include <cstdint>
#include <string_view>

namespace microstat {

/// Name recorded in manifests so ensembles can be regenerated elsewhere.
inline constexpr std::string_view kRngAlgorithm = "splitmix64/v1";

/// SplitMix64 finalizer (Steele, Lea, Flood 2014). Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based draw: a well-mixed word addressed by (key, counter).
constexpr std::uint64_t counter_hash(std::uint64_t key, std::uint64_t counter)
{
    return mix64(mix64(key + 0x9e3779b97f4a7c15ULL) ^ (counter * 0xd1342543de82ef95ULL + 1));
}

/// Derives an independent stream key from a parent seed and a label.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label)
{
    return counter_hash(seed ^ 0x5851f42d4c957f2dULL, label);
}

/**
 * Sequential SplitMix64 stream. All conversions to integers and reals are
 * done here rather than through <random> distributions so that results are
 * identical across standard library implementations.
 */
class SplitMix64
{
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next()
    {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound), bound > 0. Unbiased (rejection).
    std::uint64_t below(std::uint64_t bound)
    {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t x = next();
        while (x >= limit)
            x = next();
        return x % bound;
    }

private:
    std::uint64_t state_;
};

} // namespace microstat
