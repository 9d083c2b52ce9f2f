#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace corrspec {

/// Execution context handed to the sweep routines. Work is split into one
/// contiguous chunk per worker; callers keep determinism by writing results
/// into preallocated per-index slots and merging in index order.
class WorkerPool {
public:
    /// threads = 0 picks the hardware concurrency.
    explicit WorkerPool(unsigned threads = 0)
        : threads_(threads ? threads : default_threads()) {}

    unsigned thread_count() const { return threads_; }

    /// Runs chunk_fn(lo, hi) over a partition of [begin, end). The first
    /// exception thrown in a worker is rethrown here after the join.
    void parallel_for(std::size_t begin, std::size_t end,
                      const std::function<void(std::size_t, std::size_t)>& chunk_fn) const {
        const std::size_t total = end > begin ? end - begin : 0;
        if (total == 0) return;
        const std::size_t nworkers = std::min<std::size_t>(threads_, total);
        if (nworkers <= 1) {
            chunk_fn(begin, end);
            return;
        }
        const std::size_t chunk = (total + nworkers - 1) / nworkers;
        std::vector<std::thread> workers;
        std::vector<std::exception_ptr> errors(nworkers);
        workers.reserve(nworkers);
        for (std::size_t w = 0; w < nworkers; ++w) {
            const std::size_t lo = begin + w * chunk;
            const std::size_t hi = std::min(end, lo + chunk);
            if (lo >= hi) break;
            workers.emplace_back([&chunk_fn, &errors, w, lo, hi] {
                try {
                    chunk_fn(lo, hi);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& t : workers) t.join();
        for (auto& err : errors)
            if (err) std::rethrow_exception(err);
    }

private:
    static unsigned default_threads() {
        unsigned hw = std::thread::hardware_concurrency();
        return hw ? hw : 1;
    }

    unsigned threads_;
};

} // namespace corrspec
