#include "limsup/rational.hpp"

#include <cctype>
#include <climits>

#include "limsup/error.hpp"

namespace limsup {

static_assert(sizeof(unsigned long) == sizeof(std::uint64_t),
              "GMP unsigned long must hold 64-bit values");

BigInt to_bigint(std::uint64_t v) { return BigInt(static_cast<unsigned long>(v)); }

Rational::Rational(std::uint64_t v) : q_(to_bigint(v)) {}

Rational::Rational(const BigInt& num, const BigInt& den) {
    if (sgn(den) == 0) throw DomainError("rational with zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
}

Rational::Rational(std::uint64_t num, std::uint64_t den) : Rational(to_bigint(num), to_bigint(den)) {}

Rational Rational::parse(std::string_view text) {
    auto fail = [&]() -> Rational {
        throw DomainError("not a rational number: '" + std::string(text) + "'");
    };
    auto parse_int = [&](std::string_view s) -> BigInt {
        std::size_t i = 0;
        if (!s.empty() && (s[0] == '-' || s[0] == '+')) i = 1;
        if (i == s.size()) fail();
        for (std::size_t j = i; j < s.size(); ++j)
            if (!std::isdigit(static_cast<unsigned char>(s[j]))) fail();
        std::string digits(s.substr(s[0] == '+' ? 1 : 0));
        return BigInt(digits, 10);
    };

    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) return fail();

    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const BigInt n = parse_int(text.substr(0, slash));
        const auto den_text = text.substr(slash + 1);
        if (!den_text.empty() && (den_text[0] == '-' || den_text[0] == '+')) fail();
        const BigInt d = parse_int(den_text);
        if (sgn(d) == 0) throw DomainError("rational with zero denominator: '" + std::string(text) + "'");
        return Rational(n, d);
    }
    if (const auto dot = text.find('.'); dot != std::string_view::npos) {
        const auto int_part = text.substr(0, dot);
        const auto frac_part = text.substr(dot + 1);
        if (frac_part.empty()) fail();
        for (char c : frac_part)
            if (!std::isdigit(static_cast<unsigned char>(c))) fail();
        const bool negative = !int_part.empty() && int_part[0] == '-';
        std::string whole(int_part);
        if (whole.empty() || whole == "-" || whole == "+") whole += "0";
        BigInt scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac_part.size());
        BigInt magnitude = BigInt(::abs(parse_int(whole))) * scale + BigInt(std::string(frac_part), 10);
        return Rational(negative ? BigInt(-magnitude) : magnitude, scale);
    }
    return Rational(parse_int(text));
}

BigInt Rational::floor() const {
    BigInt r;
    mpz_fdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
    return r;
}

BigInt Rational::ceil() const {
    BigInt r;
    mpz_cdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
    return r;
}

Rational Rational::reciprocal() const {
    if (is_zero()) throw DomainError("reciprocal of zero");
    return Rational(mpq_class(1) / q_);
}

Rational Rational::abs() const { return Rational(mpq_class(::abs(q_))); }

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw DomainError("division by zero");
    q_ /= o.q_;
    return *this;
}

Rational operator-(const Rational& a) { return Rational(mpq_class(-a.q_)); }

}  // namespace limsup
