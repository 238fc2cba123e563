#ifndef CMFD_PARALLEL_HPP
#define CMFD_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace cmfd {

/// Runs fn(begin, end) over contiguous chunks of [0, n). threads <= 1 runs
/// inline. Each index is visited exactly once, so writes to disjoint output
/// slots give the same result for any thread count.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    const std::size_t workers =
        std::min<std::size_t>(n, threads > 1 ? static_cast<std::size_t>(threads) : 1);
    if (workers <= 1) {
        if (n) fn(std::size_t{0}, n);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        const std::size_t chunk = (n + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk, end = std::min(n, begin + chunk);
            pool.emplace_back([&, w, begin, end] {
                try {
                    if (begin < end) fn(begin, end);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace cmfd

#endif  // CMFD_PARALLEL_HPP
