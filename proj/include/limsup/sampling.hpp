#ifndef LIMSUP_SAMPLING_HPP
#define LIMSUP_SAMPLING_HPP

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace limsup {

/// Seeded generator whose output sequence is fixed by the C++ standard
/// (mt19937_64 plus rejection sampling), so sampled corpora are identical
/// across platforms and standard libraries.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound); bound must be positive.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

    /// Uniform integer in [lo, hi).
    std::uint64_t in_range(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo); }

private:
    std::mt19937_64 engine_;
};

using PairList = std::vector<std::pair<std::uint64_t, std::uint64_t>>;

/// Every (m, n) with lo <= m < n < hi, sorted.
PairList all_pairs(std::uint64_t lo, std::uint64_t hi);

/// `count` distinct pairs lo <= m < n < hi drawn uniformly with a fixed
/// seed, returned sorted. Falls back to all_pairs when count covers them.
PairList sample_pairs(std::uint64_t lo, std::uint64_t hi, std::size_t count, std::uint64_t seed);

}  // namespace limsup

#endif
