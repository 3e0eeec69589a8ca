#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace axiswalk {

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/*!
 * Counter-keyed xoshiro256** stream.
 *
 * The stream key is splitmix64(master_seed) ^ splitmix64(stream_index + K)
 * with K = 0x632be59bd9b4e019; the four state words are the next four
 * outputs of a splitmix64 sequence started at that key. Two streams with
 * the same (master_seed, stream_index) produce identical sequences.
 *
 * Satisfies UniformRandomBitGenerator, so it plugs into <random>.
 */
class RngStream
{
  public:
    using result_type = std::uint64_t;

    static constexpr std::string_view algorithm_id = "xoshiro256**;splitmix64-keyed";

    RngStream(std::uint64_t master_seed, std::uint64_t stream_index) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept
    {
        return std::numeric_limits<result_type>::max();
    }

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

    //! Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept
    {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    //! Uniform double in (0, 1].
    double uniform_open_closed() noexcept
    {
        return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;
    }

    std::uint64_t master_seed() const noexcept { return master_; }
    std::uint64_t stream_index() const noexcept { return index_; }

  private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept
    {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
    std::uint64_t master_;
    std::uint64_t index_;
};

} // namespace axiswalk
