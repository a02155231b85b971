#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace refinery::refine {

// Worker cap from REFINERY_THREADS; defaults to the hardware concurrency.
inline std::size_t worker_count()
{
    if (const char* env = std::getenv("REFINERY_THREADS")) {
        try {
            auto n = std::stoul(env);
            if (n >= 1)
                return n;
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

// Evaluates probe(0..n-1) and returns the result with the smallest index
// that produced a value. Independent of scheduling: workers only skip
// indices above the best one found so far.
template <typename T>
std::optional<std::pair<std::size_t, T>> first_hit(std::size_t n, const std::function<std::optional<T>(std::size_t)>& probe,
                                                   std::size_t workers = worker_count())
{
    workers = std::max<std::size_t>(1, std::min(workers, n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            if (auto r = probe(i))
                return std::make_pair(i, std::move(*r));
        return std::nullopt;
    }

    std::atomic<std::size_t> best{n};
    std::mutex guard;
    std::optional<std::pair<std::size_t, T>> result;
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n && i < best.load(); i += workers) {
                    auto r = probe(i);
                    if (!r)
                        continue;
                    std::lock_guard lock(guard);
                    if (i < best.load()) {
                        best.store(i);
                        result = std::make_pair(i, std::move(*r));
                    }
                    return;
                }
            } catch (...) {
                std::lock_guard lock(guard);
                if (!failure)
                    failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
    return result;
}

} // namespace refinery::refine
