#include "limsup/arith.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>

#include "limsup/error.hpp"

namespace limsup {

namespace {

struct PrimeStore {
    std::mutex lock;
    std::uint64_t bound = 0;
    std::vector<std::unique_ptr<const std::vector<std::uint32_t>>> tables;
};

PrimeStore& prime_store() {
    static PrimeStore store;
    return store;
}

std::vector<std::uint32_t> sieve(std::uint64_t bound) {
    std::vector<bool> composite(bound + 1, false);
    std::vector<std::uint32_t> primes;
    for (std::uint64_t i = 2; i <= bound; ++i) {
        if (composite[i]) continue;
        primes.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= bound; j += i) composite[j] = true;
    }
    return primes;
}

std::uint64_t isqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

/// floor(x) for x >= 0 as a machine integer; CapExceeded when above cap.
std::uint64_t floor_capped(const Rational& x, std::uint64_t cap, const char* what) {
    const BigInt f = x.floor();
    if (sgn(f) < 0) return 0;
    if (f > to_bigint(cap))
        throw CapExceeded(std::string(what) + ": bound " + f.get_str() + " exceeds cap " + std::to_string(cap));
    return f.get_ui();
}

/// Bitmap over 0..bound: true where gcd(b, t) = 1.
std::vector<bool> coprime_mask(std::uint64_t t, std::uint64_t bound) {
    std::vector<bool> coprime(bound + 1, true);
    coprime[0] = t == 1;
    for (const auto& [p, e] : factor_phi(t).factorization.factors)
        for (std::uint64_t b = p; b <= bound; b += p) coprime[b] = false;
    return coprime;
}

}  // namespace

std::span<const std::uint32_t> primes_up_to(std::uint64_t limit) {
    if (limit > kMaxPrimeTable)
        throw CapExceeded("prime table bound " + std::to_string(limit) + " exceeds cap " +
                          std::to_string(kMaxPrimeTable));
    auto& store = prime_store();
    const std::vector<std::uint32_t>* table = nullptr;
    {
        std::lock_guard guard(store.lock);
        if (limit > store.bound || store.tables.empty()) {
            const std::uint64_t bound = std::min(kMaxPrimeTable, std::max<std::uint64_t>({limit, 2 * store.bound, 1 << 16}));
            store.tables.push_back(std::make_unique<const std::vector<std::uint32_t>>(sieve(bound)));
            store.bound = bound;
        }
        table = store.tables.back().get();
    }
    const auto end = std::upper_bound(table->begin(), table->end(), limit);
    return {table->data(), static_cast<std::size_t>(end - table->begin())};
}

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; d += (d == 2 ? 1 : 2))
        if (n % d == 0) return false;
    return true;
}

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

unsigned Factorization::exponent_of(std::uint64_t p) const {
    const auto it = std::lower_bound(factors.begin(), factors.end(), p,
                                     [](const PrimePower& pp, std::uint64_t q) { return pp.prime < q; });
    return (it != factors.end() && it->prime == p) ? it->exponent : 0;
}

std::uint64_t totient(const Factorization& f) {
    std::uint64_t phi = f.value;
    for (const auto& [p, e] : f.factors) phi = phi / p * (p - 1);
    return phi;
}

FactorPhi factor_phi(std::uint64_t n) {
    if (n == 0) throw DomainError("factor_phi: n must be positive");
    Factorization f;
    f.value = n;
    std::uint64_t rest = n;
    auto strip = [&](std::uint64_t p) {
        if (rest % p != 0) return;
        unsigned e = 0;
        while (rest % p == 0) {
            rest /= p;
            ++e;
        }
        f.factors.push_back({p, e});
    };
    const auto table = primes_up_to(std::min(isqrt(n), kMaxPrimeTable));
    for (const std::uint32_t p : table) {
        if (static_cast<std::uint64_t>(p) * p > rest) break;
        strip(p);
    }
    // Beyond the table, plain odd trial division.
    if (!table.empty())
        for (std::uint64_t d = table.back() + 2; d <= rest / d; d += 2) strip(d);
    if (rest > 1) f.factors.push_back({rest, 1});
    const std::uint64_t phi = totient(f);
    return {std::move(f), phi};
}

Rational mertens_product(const Rational& x) {
    if (x.sign() < 0) throw DomainError("mertens_product: x must be non-negative");
    const std::uint64_t limit = floor_capped(x, kMaxPrimeTable, "mertens_product");
    BigInt num = 1;
    BigInt den = 1;
    for (const std::uint32_t p : primes_up_to(limit)) {
        num *= static_cast<unsigned long>(p);
        den *= static_cast<unsigned long>(p - 1);
    }
    return {num, den};
}

Rational restricted_prime_product(const Factorization& t, const Rational& lower) {
    const BigInt floor_lower = lower.floor();
    BigInt num = 1;
    BigInt den = 1;
    for (const auto& [p, e] : t.factors) {
        if (to_bigint(p) <= floor_lower) continue;
        num *= to_bigint(p);
        den *= to_bigint(p - 1);
    }
    return {num, den};
}

Rational restricted_prime_product(std::uint64_t t, const Rational& lower) {
    if (t == 0) throw DomainError("restricted_prime_product: t must be positive");
    return restricted_prime_product(factor_phi(t).factorization, lower);
}

Rational coprime_count(std::uint64_t t, const Rational& theta) {
    if (t == 0) throw DomainError("coprime_count: t must be positive");
    if (theta < Rational(1)) throw DomainError("coprime_count: theta must be >= 1, got " + theta.str());
    const std::uint64_t bound = floor_capped(theta, kMaxPrimeTable, "coprime_count");
    std::uint64_t count = 0;
    for (std::uint64_t b = 1; b <= bound; ++b)
        if (gcd(b, t) == 1) ++count;
    return Rational(count) / theta;
}

Rational coprime_harmonic(std::uint64_t t, const Rational& x) {
    if (t == 0) throw DomainError("coprime_harmonic: t must be positive");
    if (x < Rational(1)) throw DomainError("coprime_harmonic: X must be >= 1, got " + x.str());
    const std::uint64_t bound = floor_capped(x, kMaxPrimeTable, "coprime_harmonic");
    // Common denominator lcm(1..bound) keeps the sum in integers.
    BigInt lcm = 1;
    for (const std::uint32_t p : primes_up_to(bound)) {
        std::uint64_t pk = p;
        while (pk <= bound / p) pk *= p;
        lcm *= static_cast<unsigned long>(pk);
    }
    const auto coprime = coprime_mask(t, bound);
    BigInt num = 0;
    BigInt term;
    for (std::uint64_t b = 1; b <= bound; ++b) {
        if (!coprime[b]) continue;
        mpz_divexact_ui(term.get_mpz_t(), lcm.get_mpz_t(), b);
        num += term;
    }
    return {num, lcm};
}

SieveBound sieve_upper_bound(std::uint64_t t, const Rational& x) {
    if (t == 0) throw DomainError("sieve_upper_bound: t must be positive");
    if (x < Rational(1)) throw DomainError("sieve_upper_bound: X must be >= 1, got " + x.str());
    const std::uint64_t limit = floor_capped(x, kMaxPrimeTable, "sieve_upper_bound");
    BigInt num = 1;
    BigInt den = 1;
    for (const std::uint32_t p : primes_up_to(limit)) {
        if (t % p == 0) continue;
        num *= static_cast<unsigned long>(p);
        den *= static_cast<unsigned long>(p - 1);
    }
    BigInt div_num = 1;
    BigInt div_den = 1;
    for (const auto& [p, e] : factor_phi(t).factorization.factors) {
        if (p > limit) break;
        div_num *= to_bigint(p - 1);
        div_den *= to_bigint(p);
    }
    return {Rational(num, den), mertens_product(x), Rational(div_num, div_den)};
}

BoundedReal integral_S(std::uint64_t t, const Rational& x, int precision) {
    if (t == 0) throw DomainError("integral_S: t must be positive");
    if (x < Rational(1)) throw DomainError("integral_S: X must be >= 1, got " + x.str());
    const std::uint64_t bound = floor_capped(x, kMaxPrimeTable, "integral_S");
    const auto coprime = coprime_mask(t, bound);
    // sum ln(X/b) = count * ln X - ln(prod b); one logarithm of a big product
    // replaces `count` separate ones.
    std::uint64_t count = 0;
    BigInt product = 1;
    for (std::uint64_t b = 1; b <= bound; ++b) {
        if (!coprime[b]) continue;
        ++count;
        product *= static_cast<unsigned long>(b);
    }
    const int working = precision + 64;
    BoundedReal total = BoundedReal(Rational(count), working) * log(BoundedReal(x, working));
    total -= log(BoundedReal(product, working));
    return total;
}

namespace {

// First continued-fraction convergent of e^k (taken to 256 bits) within
// relative 1e-13 of it.
Rational compute_exp_rational(unsigned k) {
    if (k == 0) return Rational(1);
    Mpfr value(256);
    mpfr_set_ui(value.get(), k, MPFR_RNDN);
    mpfr_exp(value.get(), value.get(), MPFR_RNDN);
    mpq_class target;
    mpfr_get_q(target.get_mpq_t(), value.get());
    const Rational exact(BigInt(target.get_num()), BigInt(target.get_den()));
    BigInt tol_den;
    mpz_ui_pow_ui(tol_den.get_mpz_t(), 10, 13);
    const Rational tolerance = exact / Rational(tol_den);

    BigInt num = exact.num();
    BigInt den = exact.den();
    BigInt p_prev = 0, q_prev = 1;
    BigInt p_cur = 1, q_cur = 0;
    while (true) {
        BigInt a;
        mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        BigInt p_next = a * p_cur + p_prev;
        BigInt q_next = a * q_cur + q_prev;
        p_prev = std::move(p_cur);
        q_prev = std::move(q_cur);
        p_cur = std::move(p_next);
        q_cur = std::move(q_next);
        Rational convergent(p_cur, q_cur);
        if ((convergent - exact).abs() <= tolerance) return convergent;
        BigInt r = num - a * den;
        num = std::move(den);
        den = std::move(r);
    }
}

}  // namespace

Rational exp_rational(unsigned k) {
    static std::mutex lock;
    static std::map<unsigned, Rational> cache;
    {
        std::lock_guard guard(lock);
        if (const auto it = cache.find(k); it != cache.end()) return it->second;
    }
    Rational value = compute_exp_rational(k);
    std::lock_guard guard(lock);
    cache.emplace(k, value);
    return value;
}

ScaleLadder::ScaleLadder(unsigned K) {
    approx_.reserve(K + 1);
    for (unsigned k = 0; k <= K; ++k) approx_.push_back(exp_rational(k));
}

const Rational& ScaleLadder::at(unsigned k) const {
    if (k >= approx_.size())
        throw DomainError("scale ladder index " + std::to_string(k) + " beyond K = " +
                          std::to_string(approx_.size() - 1));
    return approx_[k];
}

}  // namespace limsup
