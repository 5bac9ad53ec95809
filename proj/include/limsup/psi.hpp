#ifndef LIMSUP_PSI_HPP
#define LIMSUP_PSI_HPP

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <string_view>

#include "limsup/rational.hpp"

namespace limsup {

enum class PsiGenerator { half, reciprocal, prime_support, file, derived };

std::string to_string(PsiGenerator g);

/// Non-negative rational approximation function psi on 1..n_max.
///
/// Closed-form generators are evaluated on demand; file-backed and derived
/// functions hold an explicit table where absent entries are 0.
class PsiFunction {
public:
    static PsiFunction half();
    static PsiFunction reciprocal();
    /// psi(n) = radius on primes n, else 0.
    static PsiFunction prime_support(Rational radius);
    static PsiFunction from_table(std::map<std::uint64_t, Rational> table, std::uint64_t n_max,
                                  PsiGenerator tag = PsiGenerator::derived);
    /// Reads "n,num,den" lines; '#' starts a comment. Throws ConfigError.
    static PsiFunction from_file(const std::string& path);
    /// Parses a generator spec: half | recip | primes:R | file:PATH.
    static PsiFunction parse(std::string_view spec);

    Rational operator()(std::uint64_t n) const;

    PsiGenerator generator() const { return generator_; }
    bool normalized() const { return normalized_; }
    std::uint64_t n_max() const { return n_max_; }
    /// Human-readable generator description, e.g. "primes:1/3".
    const std::string& label() const { return label_; }

    /// The table for table-backed functions (empty for closed forms).
    const std::map<std::uint64_t, Rational>& table() const { return table_; }

    friend PsiFunction normalize_psi(const PsiFunction& psi);

private:
    PsiGenerator generator_ = PsiGenerator::derived;
    std::string label_;
    Rational radius_;
    std::map<std::uint64_t, Rational> table_;
    std::uint64_t n_max_ = std::numeric_limits<std::uint64_t>::max();
    bool normalized_ = false;
};

/// The normalization rule applied to a single value at n.
Rational normalize_value(const Rational& value, std::uint64_t n);

/// Clamps values above 1/2 to 1/2 and drops values in (0, 1/n) to 0.
/// Throws DomainError on a negative value.
PsiFunction normalize_psi(const PsiFunction& psi);

}  // namespace limsup

#endif
