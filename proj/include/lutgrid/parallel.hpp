#ifndef LUTGRID_PARALLEL_HPP
#define LUTGRID_PARALLEL_HPP

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace lutgrid {

/// Runs fn(row_begin, row_end) over [0, rows) split into contiguous blocks,
/// one per worker. Callers must only write disjoint per-row outputs, so the
/// result never depends on the worker count.
template <typename Fn>
void parallel_rows(int rows, int threads, Fn&& fn)
{
    const int workers = std::clamp(threads, 1, std::max(rows, 1));
    if (workers == 1) {
        fn(0, rows);
        return;
    }

    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        const int begin = static_cast<int>(static_cast<long long>(rows) * w / workers);
        const int end = static_cast<int>(static_cast<long long>(rows) * (w + 1) / workers);
        pool.emplace_back([&, begin, end] {
            try {
                fn(begin, end);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
}

} // namespace lutgrid

#endif // LUTGRID_PARALLEL_HPP
