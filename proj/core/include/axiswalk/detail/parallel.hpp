#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace axiswalk {

template<class Fn>
auto parallel_replicas(std::int64_t count, unsigned threads, Fn fn)
    -> std::vector<decltype(fn(std::int64_t{}))>
{
    using T = decltype(fn(std::int64_t{}));
    std::vector<std::optional<T>> slots(static_cast<std::size_t>(count < 0 ? 0 : count));
    std::atomic<std::int64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (;;)
        {
            const std::int64_t r = next.fetch_add(1);
            if (r >= count)
                return;
            try
            {
                slots[static_cast<std::size_t>(r)].emplace(fn(r));
            }
            catch (...)
            {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next.store(count);
                return;
            }
        }
    };

    const unsigned nt = static_cast<unsigned>(
        std::max<std::int64_t>(1, std::min<std::int64_t>(threads == 0 ? 1 : threads, count)));
    if (nt == 1)
        worker();
    else
    {
        std::vector<std::thread> pool;
        pool.reserve(nt);
        for (unsigned t = 0; t < nt; ++t)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }
    if (failure)
        std::rethrow_exception(failure);

    std::vector<T> out;
    out.reserve(slots.size());
    for (auto& s : slots)
        out.push_back(std::move(*s));
    return out;
}

} // namespace axiswalk
