#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace sievekit {

// Deterministic chunked parallelism: work is split into fixed chunks whose
// boundaries depend only on the problem size, never on the thread count, and
// per-chunk results are combined in chunk order. Totals are bit-identical for
// any number of workers.

inline int effective_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(std::min(hw, 16u));
}

// fn(chunk_index, begin, end) returns the chunk's value, stored in order.
template <typename T, typename Fn>
std::vector<T> map_chunks(std::int64_t begin, std::int64_t end, std::int64_t chunk,
                          int threads, Fn&& fn) {
    if (end < begin) end = begin;
    if (chunk <= 0) chunk = 1;
    const std::size_t nchunks = static_cast<std::size_t>((end - begin + chunk - 1) / chunk);
    std::vector<T> out(nchunks);
    if (nchunks == 0) return out;

    const int nt = std::max(1, std::min<int>(effective_threads(threads), static_cast<int>(nchunks)));
    if (nt == 1) {
        for (std::size_t c = 0; c < nchunks; ++c) {
            const std::int64_t lo = begin + static_cast<std::int64_t>(c) * chunk;
            const std::int64_t hi = std::min(end, lo + chunk);
            out[c] = fn(c, lo, hi);
        }
        return out;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(nchunks);
    auto worker = [&]() {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= nchunks) return;
            const std::int64_t lo = begin + static_cast<std::int64_t>(c) * chunk;
            const std::int64_t hi = std::min(end, lo + chunk);
            try {
                out[c] = fn(c, lo, hi);
            } catch (...) {
                errors[c] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nt));
    for (int i = 0; i < nt; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    // rethrow the lowest-indexed failure so errors match a serial run
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

// Chunked loop with no per-chunk result.
template <typename Fn>
void for_chunks(std::int64_t begin, std::int64_t end, std::int64_t chunk, int threads, Fn&& fn) {
    map_chunks<char>(begin, end, chunk, threads,
                     [&](std::size_t c, std::int64_t lo, std::int64_t hi) {
                         fn(c, lo, hi);
                         return char(0);
                     });
}

// Neumaier compensated sum, fixed left-to-right order.
inline double compensated_sum(const std::vector<double>& xs) {
    double s = 0.0, comp = 0.0;
    for (double x : xs) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x))
            comp += (s - t) + x;
        else
            comp += (x - t) + s;
        s = t;
    }
    return s + comp;
}

// Deterministic parallel sum of fn over [begin, end): per-chunk serial
// compensated sums combined in chunk order.
inline double parallel_sum(std::int64_t begin, std::int64_t end, std::int64_t chunk, int threads,
                           const std::function<double(std::int64_t)>& fn) {
    auto parts = map_chunks<double>(begin, end, chunk, threads,
                                    [&](std::size_t, std::int64_t lo, std::int64_t hi) {
                                        double s = 0.0, comp = 0.0;
                                        for (std::int64_t n = lo; n < hi; ++n) {
                                            const double x = fn(n);
                                            double t = s + x;
                                            if (std::abs(s) >= std::abs(x))
                                                comp += (s - t) + x;
                                            else
                                                comp += (x - t) + s;
                                            s = t;
                                        }
                                        return s + comp;
                                    });
    return compensated_sum(parts);
}

} // namespace sievekit
