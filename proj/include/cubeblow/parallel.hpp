#pragma once

// Tiny deterministic fork-join helper: results land in caller-owned slots
// indexed by task id, so the merge order never depends on scheduling.

#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace cubeblow {

/// Worker count from the CUBE_BLOWUP_THREADS environment variable:
/// unset or 0 means auto (hardware concurrency), anything else is taken
/// literally.
inline unsigned threads_from_env() {
    const char* v = std::getenv("CUBE_BLOWUP_THREADS");
    if (!v || !*v) return 0;
    char* end = nullptr;
    long parsed = std::strtol(v, &end, 10);
    if (end && *end == '\0' && parsed > 0) return static_cast<unsigned>(parsed);
    return 0;
}

inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

inline void parallel_for(std::size_t count, unsigned threads,
                         const std::function<void(std::size_t)>& fn) {
    threads = resolve_threads(threads);
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    if (threads > count) threads = static_cast<unsigned>(count);
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr err;
    auto work = [&] {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!err) err = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace cubeblow
