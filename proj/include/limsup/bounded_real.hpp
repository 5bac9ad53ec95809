#ifndef LIMSUP_BOUNDED_REAL_HPP
#define LIMSUP_BOUNDED_REAL_HPP

#include <cstdint>
#include <string>

#include <mpfr.h>

#include "limsup/rational.hpp"

namespace limsup {

/// Default working precision (bits) for every logarithm in the library.
inline constexpr int kDefaultPrecision = 128;

/// Owning MPFR float.
class Mpfr {
public:
    explicit Mpfr(int precision);
    Mpfr(const Mpfr& other);
    Mpfr(Mpfr&& other) noexcept;
    Mpfr& operator=(const Mpfr& other);
    Mpfr& operator=(Mpfr&& other) noexcept;
    ~Mpfr();

    mpfr_ptr get() { return value_; }
    mpfr_srcptr get() const { return value_; }
    int precision() const { return static_cast<int>(mpfr_get_prec(value_)); }

private:
    mpfr_t value_;
};

/// A real number known only to lie in the closed interval [lower, upper].
/// Every operation rounds outward, so the enclosure is always rigorous.
class BoundedReal {
public:
    explicit BoundedReal(int precision = kDefaultPrecision);
    BoundedReal(const Rational& exact, int precision);
    BoundedReal(const BigInt& exact, int precision);

    int precision() const { return lo_.precision(); }

    const Mpfr& lower() const { return lo_; }
    const Mpfr& upper() const { return hi_; }

    /// Midpoint of the enclosure.
    double value() const;
    /// Half-width of the enclosure, rounded up.
    double error() const;
    /// log2 of the half-width (-inf for an exact point).
    double log2_error() const;

    bool is_exact() const;

    /// True when every point of the enclosure is strictly below / above q.
    bool certainly_less(const Rational& q) const;
    bool certainly_greater(const Rational& q) const;

    /// Floor of the enclosed value. Throws PrecisionError if the enclosure
    /// straddles an integer or comes within 2^-guard_bits of one.
    BigInt floor_checked(int guard_bits) const;

    BoundedReal& operator+=(const BoundedReal& o);
    BoundedReal& operator-=(const BoundedReal& o);
    BoundedReal& operator*=(const BoundedReal& o);
    BoundedReal& operator/=(const BoundedReal& o);

    friend BoundedReal operator+(BoundedReal a, const BoundedReal& b) { return a += b; }
    friend BoundedReal operator-(BoundedReal a, const BoundedReal& b) { return a -= b; }
    friend BoundedReal operator*(BoundedReal a, const BoundedReal& b) { return a *= b; }
    friend BoundedReal operator/(BoundedReal a, const BoundedReal& b) { return a /= b; }

    friend BoundedReal log(const BoundedReal& x);
    friend BoundedReal exp(const BoundedReal& x);
    friend BoundedReal max(const BoundedReal& x, const BoundedReal& y);
    friend BoundedReal floor_log(const BoundedReal& x);

    /// Decimal rendering "value +/- error" for diagnostics.
    std::string str(int digits = 12) const;

private:
    Mpfr lo_;
    Mpfr hi_;
};

/// Natural logarithm with the floor convention log x := max(1, log x).
BoundedReal floor_log(const BoundedReal& x);

/// x^y for x > 0, computed as exp(y log x).
BoundedReal pow(const BoundedReal& x, const BoundedReal& y);

}  // namespace limsup

#endif
