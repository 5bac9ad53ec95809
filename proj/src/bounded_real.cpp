#include "limsup/bounded_real.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "limsup/error.hpp"

namespace limsup {

Mpfr::Mpfr(int precision) { mpfr_init2(value_, precision); mpfr_set_zero(value_, 1); }

Mpfr::Mpfr(const Mpfr& other) {
    mpfr_init2(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
}

Mpfr::Mpfr(Mpfr&& other) noexcept {
    // MPFR has no move primitive; steal the limbs by swapping with a fresh value.
    mpfr_init2(value_, mpfr_get_prec(other.value_));
    mpfr_swap(value_, other.value_);
}

Mpfr& Mpfr::operator=(const Mpfr& other) {
    if (this != &other) {
        mpfr_set_prec(value_, mpfr_get_prec(other.value_));
        mpfr_set(value_, other.value_, MPFR_RNDN);
    }
    return *this;
}

Mpfr& Mpfr::operator=(Mpfr&& other) noexcept {
    mpfr_swap(value_, other.value_);
    return *this;
}

Mpfr::~Mpfr() { mpfr_clear(value_); }

namespace {

void set_rational(mpfr_ptr out, const Rational& q, mpfr_rnd_t mode) {
    mpfr_set_q(out, q.raw().get_mpq_t(), mode);
}

}  // namespace

BoundedReal::BoundedReal(int precision) : lo_(precision), hi_(precision) {}

BoundedReal::BoundedReal(const Rational& exact, int precision) : lo_(precision), hi_(precision) {
    set_rational(lo_.get(), exact, MPFR_RNDD);
    set_rational(hi_.get(), exact, MPFR_RNDU);
}

BoundedReal::BoundedReal(const BigInt& exact, int precision) : lo_(precision), hi_(precision) {
    mpfr_set_z(lo_.get(), exact.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(hi_.get(), exact.get_mpz_t(), MPFR_RNDU);
}

double BoundedReal::value() const {
    Mpfr mid(precision() + 2);
    mpfr_add(mid.get(), lo_.get(), hi_.get(), MPFR_RNDN);
    mpfr_div_2ui(mid.get(), mid.get(), 1, MPFR_RNDN);
    return mpfr_get_d(mid.get(), MPFR_RNDN);
}

double BoundedReal::error() const {
    Mpfr w(precision());
    mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
    mpfr_div_2ui(w.get(), w.get(), 1, MPFR_RNDU);
    return mpfr_get_d(w.get(), MPFR_RNDU);
}

double BoundedReal::log2_error() const {
    Mpfr w(precision());
    mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
    if (mpfr_zero_p(w.get())) return -std::numeric_limits<double>::infinity();
    mpfr_div_2ui(w.get(), w.get(), 1, MPFR_RNDU);
    mpfr_log2(w.get(), w.get(), MPFR_RNDU);
    return mpfr_get_d(w.get(), MPFR_RNDU);
}

bool BoundedReal::is_exact() const { return mpfr_equal_p(lo_.get(), hi_.get()) != 0; }

bool BoundedReal::certainly_less(const Rational& q) const {
    return mpfr_cmp_q(hi_.get(), q.raw().get_mpq_t()) < 0;
}

bool BoundedReal::certainly_greater(const Rational& q) const {
    return mpfr_cmp_q(lo_.get(), q.raw().get_mpq_t()) > 0;
}

BigInt BoundedReal::floor_checked(int guard_bits) const {
    BigInt flo;
    BigInt fhi;
    mpfr_get_z(flo.get_mpz_t(), lo_.get(), MPFR_RNDD);
    mpfr_get_z(fhi.get_mpz_t(), hi_.get(), MPFR_RNDD);
    if (flo != fhi) throw PrecisionError("floor undecidable: enclosure " + str() + " straddles an integer");

    // Distance from the enclosure to the integers flo and flo + 1.
    Mpfr below(precision());
    Mpfr above(precision());
    mpfr_sub_z(below.get(), lo_.get(), flo.get_mpz_t(), MPFR_RNDD);
    BigInt next = flo + 1;
    mpfr_z_sub(above.get(), next.get_mpz_t(), hi_.get(), MPFR_RNDD);
    Mpfr guard(precision());
    mpfr_set_ui_2exp(guard.get(), 1, -guard_bits, MPFR_RNDN);
    if (mpfr_cmp(below.get(), guard.get()) < 0 || mpfr_cmp(above.get(), guard.get()) < 0)
        throw PrecisionError("floor undecidable: value " + str() + " lies within 2^-" +
                             std::to_string(guard_bits) + " of an integer");
    return flo;
}

BoundedReal& BoundedReal::operator+=(const BoundedReal& o) {
    mpfr_add(lo_.get(), lo_.get(), o.lo_.get(), MPFR_RNDD);
    mpfr_add(hi_.get(), hi_.get(), o.hi_.get(), MPFR_RNDU);
    return *this;
}

BoundedReal& BoundedReal::operator-=(const BoundedReal& o) {
    Mpfr new_lo(precision());
    mpfr_sub(new_lo.get(), lo_.get(), o.hi_.get(), MPFR_RNDD);
    mpfr_sub(hi_.get(), hi_.get(), o.lo_.get(), MPFR_RNDU);
    lo_ = std::move(new_lo);
    return *this;
}

BoundedReal& BoundedReal::operator*=(const BoundedReal& o) {
    const int p = precision();
    Mpfr cand_lo(p);
    Mpfr cand_hi(p);
    Mpfr t(p);
    bool first = true;
    for (mpfr_srcptr a : {lo_.get(), hi_.get()}) {
        for (mpfr_srcptr b : {o.lo_.get(), o.hi_.get()}) {
            mpfr_mul(t.get(), a, b, MPFR_RNDD);
            if (first || mpfr_cmp(t.get(), cand_lo.get()) < 0) mpfr_set(cand_lo.get(), t.get(), MPFR_RNDN);
            mpfr_mul(t.get(), a, b, MPFR_RNDU);
            if (first || mpfr_cmp(t.get(), cand_hi.get()) > 0) mpfr_set(cand_hi.get(), t.get(), MPFR_RNDN);
            first = false;
        }
    }
    lo_ = std::move(cand_lo);
    hi_ = std::move(cand_hi);
    return *this;
}

BoundedReal& BoundedReal::operator/=(const BoundedReal& o) {
    if (mpfr_sgn(o.lo_.get()) <= 0 && mpfr_sgn(o.hi_.get()) >= 0)
        throw PrecisionError("division by an enclosure containing zero");
    const int p = precision();
    BoundedReal inv(p);
    mpfr_ui_div(inv.lo_.get(), 1, o.hi_.get(), MPFR_RNDD);
    mpfr_ui_div(inv.hi_.get(), 1, o.lo_.get(), MPFR_RNDU);
    return *this *= inv;
}

BoundedReal log(const BoundedReal& x) {
    if (mpfr_sgn(x.lo_.get()) <= 0) throw DomainError("logarithm of a non-positive enclosure");
    BoundedReal r(x.precision());
    mpfr_log(r.lo_.get(), x.lo_.get(), MPFR_RNDD);
    mpfr_log(r.hi_.get(), x.hi_.get(), MPFR_RNDU);
    return r;
}

BoundedReal exp(const BoundedReal& x) {
    BoundedReal r(x.precision());
    mpfr_exp(r.lo_.get(), x.lo_.get(), MPFR_RNDD);
    mpfr_exp(r.hi_.get(), x.hi_.get(), MPFR_RNDU);
    return r;
}

BoundedReal max(const BoundedReal& x, const BoundedReal& y) {
    BoundedReal r(x.precision());
    mpfr_max(r.lo_.get(), x.lo_.get(), y.lo_.get(), MPFR_RNDD);
    mpfr_max(r.hi_.get(), x.hi_.get(), y.hi_.get(), MPFR_RNDU);
    return r;
}

BoundedReal floor_log(const BoundedReal& x) {
    const BoundedReal one(Rational(1), x.precision());
    if (x.certainly_greater(Rational(0))) return max(log(x), one);
    // Non-positive points map to 1; only the upper end can push the result up.
    BoundedReal r = one;
    if (mpfr_sgn(x.hi_.get()) > 0) {
        mpfr_log(r.hi_.get(), x.hi_.get(), MPFR_RNDU);
        mpfr_max(r.hi_.get(), r.hi_.get(), one.hi_.get(), MPFR_RNDU);
    }
    return r;
}

BoundedReal pow(const BoundedReal& x, const BoundedReal& y) { return exp(y * log(x)); }

std::string BoundedReal::str(int digits) const {
    std::ostringstream os;
    os.precision(digits);
    os << value() << " +/- " << std::scientific;
    os.precision(2);
    os << error();
    return os.str();
}

}  // namespace limsup
