#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace ace::util {

// Runs fn(i) for i in [0, n) on up to max_workers threads. Results land at
// their own index, so output order never depends on scheduling. The first
// exception (lowest index) is rethrown after all workers join.
template <typename Result>
std::vector<Result> parallel_map(std::size_t n, std::size_t max_workers,
                                 const std::function<Result(std::size_t)>& fn) {
    std::vector<Result> results(n);
    if (n == 0) return results;
    std::size_t workers = std::min(max_workers == 0 ? std::size_t{1} : max_workers, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) results[i] = fn(i);
        return results;
    }

    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                results[i] = fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    for (std::size_t i = 0; i < n; ++i)
        if (errors[i]) std::rethrow_exception(errors[i]);
    return results;
}

} // namespace ace::util
