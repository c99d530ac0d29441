#pragma once

#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace lagflow {

// Runs fn(worker, begin, end) over a fixed contiguous partition of [0, n).
// The partition depends only on (n, workers), never on scheduling, and each
// item is processed by exactly one worker — the determinism contract: outputs
// written per item are identical for any worker count, and per-worker partial
// reductions can be combined in worker order afterwards.
template <class Fn>
void parallel_for_blocks(long n, int workers, Fn&& fn) {
    if (n <= 0) return;
    if (workers < 1) workers = 1;
    long w = workers < n ? workers : n;
    long chunk = (n + w - 1) / w;
    if (w == 1) {
        fn(0, 0L, n);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(w) - 1);
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto run = [&](long worker) {
        long b = worker * chunk;
        long e = b + chunk < n ? b + chunk : n;
        if (b >= e) return;
        try {
            fn(worker, b, e);
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    };
    for (long t = 1; t < w; ++t) threads.emplace_back(run, t);
    run(0);
    for (auto& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace lagflow
