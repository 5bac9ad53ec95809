#include "limsup/sampling.hpp"

#include <algorithm>
#include <set>

#include "limsup/error.hpp"

namespace limsup {

PairList all_pairs(std::uint64_t lo, std::uint64_t hi) {
    PairList out;
    for (std::uint64_t m = lo; m < hi; ++m)
        for (std::uint64_t n = m + 1; n < hi; ++n) out.emplace_back(m, n);
    return out;
}

PairList sample_pairs(std::uint64_t lo, std::uint64_t hi, std::size_t count, std::uint64_t seed) {
    if (hi <= lo + 1) return {};
    const std::uint64_t width = hi - lo;
    const unsigned __int128 total = static_cast<unsigned __int128>(width) * (width - 1) / 2;
    if (total <= count) return all_pairs(lo, hi);
    SeededRng rng(seed);
    std::set<std::pair<std::uint64_t, std::uint64_t>> chosen;
    while (chosen.size() < count) {
        const std::uint64_t a = rng.in_range(lo, hi);
        const std::uint64_t b = rng.in_range(lo, hi);
        if (a == b) continue;
        chosen.emplace(std::min(a, b), std::max(a, b));
    }
    return {chosen.begin(), chosen.end()};
}

}  // namespace limsup
