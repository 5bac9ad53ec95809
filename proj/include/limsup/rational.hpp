#ifndef LIMSUP_RATIONAL_HPP
#define LIMSUP_RATIONAL_HPP

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace limsup {

using BigInt = mpz_class;

BigInt to_bigint(std::uint64_t v);

/// Exact fraction, always held in lowest terms with a positive denominator.
class Rational {
public:
    Rational() = default;
    Rational(int v) : q_(v) {}  // NOLINT(google-explicit-constructor)
    Rational(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
    explicit Rational(std::uint64_t v);
    explicit Rational(const BigInt& v) : q_(v) {}
    /// Throws DomainError on a zero denominator.
    Rational(const BigInt& num, const BigInt& den);
    Rational(std::uint64_t num, std::uint64_t den);

    /// Accepts "a", "a/b" and finite decimals such as "-0.125".
    static Rational parse(std::string_view text);

    BigInt num() const { return q_.get_num(); }
    BigInt den() const { return q_.get_den(); }
    const mpq_class& raw() const { return q_; }

    int sign() const { return sgn(q_); }
    bool is_zero() const { return sgn(q_) == 0; }

    /// Largest integer not exceeding the value.
    BigInt floor() const;
    BigInt ceil() const;

    Rational reciprocal() const;
    Rational abs() const;

    double to_double() const { return q_.get_d(); }
    /// "a/b", or "a" when the denominator is 1.
    std::string str() const { return q_.get_str(); }

    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a);

    friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    explicit Rational(mpq_class q) : q_(std::move(q)) {}

    mpq_class q_;
};

inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace limsup

#endif
