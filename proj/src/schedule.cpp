#include "limsup/schedule.hpp"

#include <bit>

#include "limsup/arith.hpp"
#include "limsup/error.hpp"
#include "limsup/overlap.hpp"
#include "limsup/parallel.hpp"

namespace limsup {

namespace {

BigInt pow2(std::uint64_t e) {
    BigInt v;
    mpz_ui_pow_ui(v.get_mpz_t(), 2, e);
    return v;
}

/// base^e, or nullopt once it exceeds kMaxBlockExponent.
std::optional<std::uint64_t> block_exponent(unsigned base, unsigned e) {
    std::uint64_t v = 1;
    for (unsigned i = 0; i < e; ++i) {
        v *= base;
        if (v > kMaxBlockExponent) return std::nullopt;
    }
    return v;
}

}  // namespace

bool BlockRange::contains(std::uint64_t n) const {
    const BigInt v = to_bigint(n);
    return lo <= v && v < hi;
}

BlockRange block_bounds(unsigned h, unsigned base) {
    if (base < 2) throw DomainError("block base must be at least 2");
    const auto lo_exp = block_exponent(base, h);
    const auto hi_exp = block_exponent(base, h + 1);
    if (!lo_exp || !hi_exp)
        throw CapExceeded("block h=" + std::to_string(h) + " base=" + std::to_string(base) +
                          " has an edge beyond 2^" + std::to_string(kMaxBlockExponent) +
                          "; use a smaller h or base 2");
    return {h, base, pow2(*lo_exp), pow2(*hi_exp)};
}

std::optional<unsigned> block_of(std::uint64_t n, unsigned base) {
    if (base < 2) throw DomainError("block base must be at least 2");
    if (n < 2) return std::nullopt;
    // 2^(base^h) <= n  iff  base^h <= floor(log2 n)
    const std::uint64_t floor_log2 = std::bit_width(n) - 1;
    unsigned h = 0;
    std::uint64_t power = base;
    while (power <= floor_log2) {
        ++h;
        power *= base;
    }
    return h;
}

unsigned K_of_h(unsigned h, const Rational& epsilon) {
    if (epsilon.sign() <= 0) throw DomainError("epsilon must be positive, got " + epsilon.str());
    if (h == 0) return 1;
    constexpr int kPrecision = 128;
    const BoundedReal ln4 = log(BoundedReal(Rational(4), kPrecision));
    const BoundedReal product = BoundedReal(epsilon * Rational(static_cast<long>(h)), kPrecision) * ln4;
    const BigInt f = product.floor_checked(64);
    if (f > BigInt(static_cast<unsigned long>(std::numeric_limits<unsigned>::max())))
        throw CapExceeded("K(h) exceeds the supported range");
    return std::max(1u, static_cast<unsigned>(f.get_ui()));
}

std::optional<Rational> BlockKSums::ratio() const {
    if (product_mass.is_zero()) return std::nullopt;
    return scaled_overlap / product_mass;
}

BlockReport select_k(unsigned h, const PsiFunction& psi, const Rational& epsilon, const PairList& pairs,
                     unsigned base, unsigned jobs) {
    BlockReport report;
    report.range = block_bounds(h, base);
    report.epsilon = epsilon;
    report.K = K_of_h(h, epsilon);
    report.pair_count = pairs.size();
    for (const auto& [m, n] : pairs) {
        if (!(m < n) || !report.range.contains(m) || !report.range.contains(n))
            throw DomainError("pair (" + std::to_string(m) + ", " + std::to_string(n) + ") is not an ordered pair inside block " +
                              std::to_string(h));
    }
    const unsigned K = report.K;

    // Per chunk: overlap sums for k = 1..K and the unscaled product mass.
    struct Partial {
        std::vector<Rational> overlap;
        Rational mass;
    };
    std::vector<Partial> partials(chunk_count(pairs.size(), jobs));
    parallel_chunks(pairs.size(), jobs, [&](std::size_t c, std::size_t begin, std::size_t end) {
        OverlapEngine engine(psi);
        Partial& part = partials[c];
        part.overlap.assign(K + 1, Rational(0));
        for (std::size_t i = begin; i < end; ++i) {
            const auto [m, n] = pairs[i];
            part.mass += engine.scaled_set(m, 0).second * engine.scaled_set(n, 0).second;
            for (unsigned k = 1; k <= K; ++k) part.overlap[k] += engine.intersection(m, n, k);
        }
    });

    Rational mass;
    std::vector<Rational> overlap(K + 1, Rational(0));
    for (const auto& part : partials) {
        mass += part.mass;
        for (unsigned k = 1; k <= K && k < part.overlap.size(); ++k) overlap[k] += part.overlap[k];
    }

    report.chosen_k = 1;
    std::optional<Rational> best;
    for (unsigned k = 1; k <= K; ++k) {
        const Rational scale = exp_rational(k);
        BlockKSums sums{k, scale * scale * overlap[k], mass};
        if (const auto r = sums.ratio(); r && (!best || *r < *best)) {
            best = *r;
            report.chosen_k = k;
        }
        report.per_k.push_back(std::move(sums));
    }
    return report;
}

PsiFunction build_psi_star(const PsiFunction& psi, const Rational& epsilon,
                           const std::map<unsigned, unsigned>& chosen, unsigned base, std::uint64_t n_max) {
    if (!psi.normalized()) throw DomainError("build_psi_star requires a normalized psi");
    std::map<std::uint64_t, Rational> table;
    for (std::uint64_t n = 2; n <= n_max; ++n) {
        const unsigned h = *block_of(n, base);
        if (h % 2 != 0) continue;
        const auto it = chosen.find(h);
        if (it == chosen.end())
            throw ConfigError("no k(h) chosen for even block h=" + std::to_string(h));
        const unsigned K = K_of_h(h, epsilon);
        if (it->second < 1 || it->second > K)
            throw ConfigError("k(" + std::to_string(h) + ") = " + std::to_string(it->second) + " outside 1.." +
                              std::to_string(K));
        const Rational v = psi(n);
        if (v.is_zero()) continue;
        table.emplace(n, v / exp_rational(it->second));
    }
    PsiFunction star = PsiFunction::from_table(std::move(table), n_max, PsiGenerator::derived);
    return star;
}

StarWindow psi_star_window(const PsiFunction& psi, const PsiFunction& star, const Rational& epsilon,
                           std::uint64_t n_max, int precision) {
    StarWindow w;
    const BoundedReal eps(epsilon, precision);
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        const Rational s = star(n);
        if (s.is_zero()) continue;
        ++w.support_size;
        const BoundedReal ratio =
            BoundedReal(s / psi(n), precision) * pow(floor_log(BoundedReal(Rational(n), precision)), eps);
        if (!w.low || ratio.value() < w.low->value()) w.low = ratio;
        if (!w.high || ratio.value() > w.high->value()) w.high = ratio;
    }
    return w;
}

}  // namespace limsup
