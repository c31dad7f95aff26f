#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace hydrosurr {

/// Runs fn(i) for i in [0, n) over `jobs` threads with static contiguous chunks.
/// Each index must write only its own output slot, so results do not depend on jobs.
template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n == 0 ? 1 : n)));
    if (jobs == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(jobs);
    const std::size_t chunk = (n + jobs - 1) / jobs;
    for (unsigned j = 0; j < jobs; ++j) {
        pool.emplace_back([&, j] {
            try {
                const std::size_t lo = j * chunk, hi = std::min(n, lo + chunk);
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                errors[j] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace hydrosurr
