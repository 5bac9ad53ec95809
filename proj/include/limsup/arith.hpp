#ifndef LIMSUP_ARITH_HPP
#define LIMSUP_ARITH_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "limsup/bounded_real.hpp"
#include "limsup/rational.hpp"

namespace limsup {

/// Largest bound for which a prime table will be built.
inline constexpr std::uint64_t kMaxPrimeTable = 10'000'000;

struct PrimePower {
    std::uint64_t prime;
    unsigned exponent;

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime factorization of a positive integer, primes strictly increasing.
struct Factorization {
    std::uint64_t value = 1;
    std::vector<PrimePower> factors;

    /// Exponent of p in value (0 if p does not divide it).
    unsigned exponent_of(std::uint64_t p) const;
    std::uint64_t largest_prime() const { return factors.empty() ? 1 : factors.back().prime; }
};

struct FactorPhi {
    Factorization factorization;
    std::uint64_t phi;
};

/// Ascending primes <= limit. Backed by a process-wide sieve that grows on
/// demand; tables are never freed, so the span stays valid for the life of
/// the process and may be shared across threads. Throws CapExceeded above
/// kMaxPrimeTable.
std::span<const std::uint32_t> primes_up_to(std::uint64_t limit);

bool is_prime(std::uint64_t n);

std::uint64_t gcd(std::uint64_t a, std::uint64_t b);

/// Factorization by trial division and Euler's totient. Throws DomainError for n = 0.
FactorPhi factor_phi(std::uint64_t n);

std::uint64_t totient(const Factorization& f);

/// prod_{p <= x} (1 - 1/p)^{-1}.
Rational mertens_product(const Rational& x);

/// prod_{p | t, p > lower} (1 - 1/p)^{-1}.
Rational restricted_prime_product(std::uint64_t t, const Rational& lower);
Rational restricted_prime_product(const Factorization& t, const Rational& lower);

/// (1/theta) * #{1 <= b <= theta : gcd(b, t) = 1}. Requires theta >= 1.
Rational coprime_count(std::uint64_t t, const Rational& theta);

/// sum_{1 <= b <= X, gcd(b, t) = 1} 1/b. Requires X >= 1.
Rational coprime_harmonic(std::uint64_t t, const Rational& x);

struct SieveBound {
    /// prod_{p <= X, p not dividing t} (1 - 1/p)^{-1}
    Rational bound;
    /// prod_{p <= X} (1 - 1/p)^{-1}
    Rational all_primes;
    /// prod_{p <= X, p | t} (1 - 1/p)
    Rational dividing_primes;
};

SieveBound sieve_upper_bound(std::uint64_t t, const Rational& x);

/// Enclosure of int_1^X S_t(theta) d theta = sum_{b <= X, (b,t)=1} ln(X/b),
/// with half-width at most 2^(-precision + ceil(log2 count)).
BoundedReal integral_S(std::uint64_t t, const Rational& x, int precision = kDefaultPrecision);

/// Rational stand-in for e^k: within relative 1e-12 of e^k, exactly 1 at
/// k = 0, strictly increasing in k.
Rational exp_rational(unsigned k);

/// The first K rational scale factors e^1 .. e^K.
class ScaleLadder {
public:
    explicit ScaleLadder(unsigned K);

    unsigned size() const { return static_cast<unsigned>(approx_.size()); }
    /// Scale factor for k in [0, K]; k = 0 gives 1.
    const Rational& at(unsigned k) const;

private:
    std::vector<Rational> approx_;  // index 0 holds e^0 = 1
};

}  // namespace limsup

#endif
