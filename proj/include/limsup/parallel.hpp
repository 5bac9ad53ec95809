#ifndef LIMSUP_PARALLEL_HPP
#define LIMSUP_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace limsup {

/// Splits [0, count) into at most `jobs` contiguous chunks and runs
/// fn(chunk_index, begin, end) for each, one thread per chunk. Chunk
/// boundaries depend only on count and jobs. The first exception thrown by
/// any chunk is rethrown after all threads join.
template <typename Fn>
std::size_t parallel_chunks(std::size_t count, unsigned jobs, Fn&& fn) {
    const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(jobs == 0 ? 1 : jobs, count));
    if (chunks == 1) {
        fn(std::size_t{0}, std::size_t{0}, count);
        return 1;
    }
    std::vector<std::exception_ptr> errors(chunks);
    std::vector<std::thread> workers;
    workers.reserve(chunks);
    for (std::size_t c = 0; c < chunks; ++c) {
        const std::size_t begin = count * c / chunks;
        const std::size_t end = count * (c + 1) / chunks;
        workers.emplace_back([&, c, begin, end] {
            try {
                fn(c, begin, end);
            } catch (...) {
                errors[c] = std::current_exception();
            }
        });
    }
    for (auto& w : workers) w.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return chunks;
}

/// Number of chunks parallel_chunks will use.
inline std::size_t chunk_count(std::size_t count, unsigned jobs) {
    return std::max<std::size_t>(1, std::min<std::size_t>(jobs == 0 ? 1 : jobs, count));
}

}  // namespace limsup

#endif
