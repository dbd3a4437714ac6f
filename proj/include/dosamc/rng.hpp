#ifndef DOSAMC_RNG_HPP
#define DOSAMC_RNG_HPP

#include <array>
#include <cstdint>

namespace dosamc {

/// SplitMix64 finalizer; also used to seed and derive substreams.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept
{
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// xoshiro256** with integer-only arithmetic, so a (seed, stream) pair yields
/// the same sequence on every platform. Substream k of seed s is seeded by
/// running SplitMix64 from splitmix64(s) ^ splitmix64(k ^ 0xD1B54A32D192ED03).
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
    {
        std::uint64_t a = seed;
        std::uint64_t b = stream ^ 0xD1B54A32D192ED03ULL;
        std::uint64_t sm = splitmix64(a) ^ splitmix64(b);
        for (auto& word : s_) word = splitmix64(sm);
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    result_type operator()() noexcept
    {
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

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n), rejection-sampled; n must be > 0.
    std::uint64_t below(std::uint64_t n) noexcept
    {
        const std::uint64_t limit = max() - max() % n;
        std::uint64_t x;
        do {
            x = (*this)();
        } while (x >= limit);
        return x % n;
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> s_{};
};

} // namespace dosamc

#endif // DOSAMC_RNG_HPP
