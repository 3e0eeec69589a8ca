#include "axiswalk/rng.hpp"

namespace axiswalk {

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index) noexcept
    : master_(master_seed), index_(stream_index)
{
    std::uint64_t key = splitmix64_mix(master_seed)
                        ^ splitmix64_mix(stream_index + 0x632be59bd9b4e019ULL);
    for (auto& word : s_)
    {
        word = splitmix64_mix(key);
        key += 0x9e3779b97f4a7c15ULL;
    }
    // xoshiro must not start from the all-zero state.
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0)
        s_[0] = 1;
}

} // namespace axiswalk
