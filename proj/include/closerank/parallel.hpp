#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace closerank {

/// Worker count used when a caller passes 0: $CLOSERANK_THREADS if set to a
/// positive integer, otherwise the hardware concurrency.
inline unsigned default_thread_count() {
    if (const char* env = std::getenv("CLOSERANK_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(worker_index, i) for every i in [0, count), with items handed
/// out dynamically in chunks. body must only write to state owned by item i
/// or by the worker. The first exception thrown is rethrown on the caller.
template <class MakeState, class Body>
void parallel_for(std::size_t count, unsigned threads, MakeState make_state, Body body) {
    if (threads == 0) threads = default_thread_count();
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));

    if (threads <= 1) {
        auto state = make_state();
        for (std::size_t i = 0; i < count; ++i) body(state, i);
        return;
    }

    constexpr std::size_t chunk = 16;
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                try {
                    auto state = make_state();
                    for (;;) {
                        const std::size_t begin = next.fetch_add(chunk, std::memory_order_relaxed);
                        if (begin >= count) break;
                        const std::size_t end = std::min(count, begin + chunk);
                        for (std::size_t i = begin; i < end; ++i) body(state, i);
                    }
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next.store(count, std::memory_order_relaxed);
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace closerank
