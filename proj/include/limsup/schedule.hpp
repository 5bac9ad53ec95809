#ifndef LIMSUP_SCHEDULE_HPP
#define LIMSUP_SCHEDULE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "limsup/bounded_real.hpp"
#include "limsup/psi.hpp"
#include "limsup/rational.hpp"
#include "limsup/sampling.hpp"

namespace limsup {

/// Default block base: blocks are 2^(4^h) <= n < 2^(4^(h+1)).
inline constexpr unsigned kDefaultBlockBase = 4;

/// Largest exponent base^(h+1) accepted for a block edge 2^(base^(h+1)).
inline constexpr std::uint64_t kMaxBlockExponent = 4096;

struct BlockRange {
    unsigned h = 0;
    unsigned base = kDefaultBlockBase;
    BigInt lo;  // 2^(base^h)
    BigInt hi;  // 2^(base^(h+1)), exclusive

    bool contains(std::uint64_t n) const;
};

/// Throws DomainError for base < 2 and CapExceeded when the upper edge
/// exponent exceeds kMaxBlockExponent.
BlockRange block_bounds(unsigned h, unsigned base = kDefaultBlockBase);

/// Index of the block containing n, or nullopt for n < 2^1.
std::optional<unsigned> block_of(std::uint64_t n, unsigned base = kDefaultBlockBase);

/// K(h) = max(1, floor(epsilon h ln 4)). The floor is taken from a 128-bit
/// enclosure and throws PrecisionError when the product lies within 2^-64
/// of an integer. h = 0 gives 1.
unsigned K_of_h(unsigned h, const Rational& epsilon);

struct BlockKSums {
    unsigned k = 0;
    /// sum over pairs of e_k^2 lambda(E_m^(k) cap E_n^(k))
    Rational scaled_overlap;
    /// sum over pairs of lambda(E_m) lambda(E_n)
    Rational product_mass;

    /// scaled_overlap / product_mass, or nullopt when product_mass is 0.
    std::optional<Rational> ratio() const;
};

struct BlockReport {
    BlockRange range;
    Rational epsilon;
    unsigned K = 1;
    std::vector<BlockKSums> per_k;
    unsigned chosen_k = 1;
    std::size_t pair_count = 0;
    /// Set when the pair list was sampled rather than exhaustive.
    std::optional<std::uint64_t> seed;
};

/// Chooses k(h) in 1..K(h) minimizing the block's scaled overlap ratio,
/// ties to the smallest k. Pairs must satisfy lo <= m < n < hi. An empty
/// pair list (or zero mass) yields chosen_k = 1. Work is split over `jobs`
/// threads; the reduction order is fixed, so the report does not depend on it.
BlockReport select_k(unsigned h, const PsiFunction& psi, const Rational& epsilon, const PairList& pairs,
                     unsigned base = kDefaultBlockBase, unsigned jobs = 1);

/// psi*(n) = psi(n) / e_{k(h)} when n lies in an even-h block, else 0,
/// tabulated on 1..n_max. Requires a normalized psi (DomainError) and a
/// chosen k(h) in 1..K(h) for every even block meeting 1..n_max
/// (ConfigError otherwise).
PsiFunction build_psi_star(const PsiFunction& psi, const Rational& epsilon,
                           const std::map<unsigned, unsigned>& chosen, unsigned base, std::uint64_t n_max);

/// Range of psi*(n) (log n)^epsilon / psi(n) over the support of psi*.
struct StarWindow {
    std::optional<BoundedReal> low;
    std::optional<BoundedReal> high;
    std::uint64_t support_size = 0;
};

StarWindow psi_star_window(const PsiFunction& psi, const PsiFunction& star, const Rational& epsilon,
                           std::uint64_t n_max, int precision = kDefaultPrecision);

}  // namespace limsup

#endif
