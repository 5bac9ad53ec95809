#ifndef LIMSUP_CIRCLE_SET_HPP
#define LIMSUP_CIRCLE_SET_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "limsup/rational.hpp"

namespace limsup {

/// Half-open interval [left, right) inside [0, 1).
struct Arc {
    Rational left;
    Rational right;

    Rational length() const { return right - left; }
    friend bool operator==(const Arc&, const Arc&) = default;
};

/// Largest modulus for which an approximation set is materialized.
inline constexpr std::uint64_t kMaxSetModulus = 1u << 20;

/// Finite union of half-open intervals on R/Z, kept sorted, disjoint and
/// with touching neighbours merged, so equal sets have equal representations.
class CircleIntervalSet {
public:
    CircleIntervalSet() = default;

    /// Canonicalizes arbitrary arcs in [0, 1): sorts, merges overlaps and
    /// touching neighbours, drops empty arcs. Throws DomainError if an arc
    /// leaves [0, 1) or has right < left.
    static CircleIntervalSet from_arcs(std::vector<Arc> arcs);
    static CircleIntervalSet full();

    std::span<const Arc> arcs() const { return arcs_; }
    std::size_t size() const { return arcs_.size(); }
    bool empty() const { return arcs_.empty(); }

    bool contains(const Rational& x) const;

    /// Empty string when every representation invariant holds, otherwise a
    /// description of the first violation.
    std::string validate() const;

    friend bool operator==(const CircleIntervalSet&, const CircleIntervalSet&) = default;

private:
    friend class ArcBuilder;
    std::vector<Arc> arcs_;
};

/// Appends arcs in ascending order, merging a new arc into the last one
/// when they overlap or touch.
class ArcBuilder {
public:
    void append(Rational left, Rational right);
    CircleIntervalSet finish() &&;

private:
    std::vector<Arc> arcs_;
};

/// E_n(radius): union over 1 <= a <= n with gcd(a, n) = 1 of
/// ((a - radius)/n, (a + radius)/n) mod 1. Requires n >= 1 and
/// 0 <= radius <= 1/2 (DomainError otherwise); n above kMaxSetModulus
/// raises CapExceeded.
CircleIntervalSet build_E(std::uint64_t n, const Rational& radius);

Rational measure(const CircleIntervalSet& s);

CircleIntervalSet intersect(const CircleIntervalSet& a, const CircleIntervalSet& b);

/// measure(intersect(a, b)) without materializing the intersection.
Rational intersection_measure(const CircleIntervalSet& a, const CircleIntervalSet& b);

/// Exact measure of the union of all sets, by a global endpoint sweep.
Rational union_measure(std::span<const CircleIntervalSet> sets);

/// Fraction of the M midpoint-grid points (i + 1/2)/M lying in a and b.
/// Uses only per-set integer grid counting, never the interval merge.
Rational grid_oracle(const CircleIntervalSet& a, const CircleIntervalSet& b, std::uint64_t M);

}  // namespace limsup

#endif
